"""Words over the alphabets used throughout the package, and exact linear
combinations of them.

Five alphabets are supported:

    Y    letters y_k, k >= 1
    Ybi  letters y_{k,m}, k >= 1, m >= 0
    B    letters b_s, s >= 0
    X01  letters x_0, x_1
    PY   letters p, y

A ``Word`` is an immutable tuple of ``Letter`` values drawn from a single
alphabet.  A ``LinComb`` is a sparse map from keys (words, or tuples of words
for tensors) to nonzero ``Fraction`` coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Union

Y = "Y"
YBI = "Ybi"
B = "B"
X01 = "X01"
PY = "PY"
ALPHABETS = (Y, YBI, B, X01, PY)

Number = Union[int, Fraction]


class AlphabetError(ValueError):
    """Raised when words from different alphabets are combined."""


class ParseError(ValueError):
    """Raised for malformed word, combination or series text.

    ``position`` is the character offset where parsing failed.
    """

    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class Letter(NamedTuple):
    alphabet: str
    idx: tuple

    def __str__(self) -> str:
        a, i = self.alphabet, self.idx
        if a == Y:
            return f"y{i[0]}"
        if a == YBI:
            return f"y({i[0]}|{i[1]})"
        if a == B:
            return f"b{i[0]}"
        if a == X01:
            return f"x{i[0]}"
        return i[0]


def _check_letter(alphabet: str, idx: tuple) -> None:
    ok = True
    if alphabet == Y:
        ok = len(idx) == 1 and idx[0] >= 1
    elif alphabet == YBI:
        ok = len(idx) == 2 and idx[0] >= 1 and idx[1] >= 0
    elif alphabet == B:
        ok = len(idx) == 1 and idx[0] >= 0
    elif alphabet == X01:
        ok = len(idx) == 1 and idx[0] in (0, 1)
    elif alphabet == PY:
        ok = len(idx) == 1 and idx[0] in ("p", "y")
    else:
        raise AlphabetError(f"unknown alphabet {alphabet!r}")
    if not ok:
        raise AlphabetError(f"invalid index {idx!r} for alphabet {alphabet}")


def letter(alphabet: str, *idx) -> Letter:
    _check_letter(alphabet, idx)
    return Letter(alphabet, tuple(idx))


def b(s: int) -> Letter:
    return letter(B, s)


def y(k: int) -> Letter:
    return letter(Y, k)


def ybi(k: int, m: int) -> Letter:
    return letter(YBI, k, m)


def x(e: int) -> Letter:
    return letter(X01, e)


P_LETTER = Letter(PY, ("p",))
Y_LETTER = Letter(PY, ("y",))


class Word(tuple):
    """An immutable sequence of letters from one alphabet.

    The empty word is the unit; its alphabet is ``None`` and it is compatible
    with every alphabet.
    """

    def __new__(cls, letters: Iterable[Letter] = ()):
        w = super().__new__(cls, letters)
        alph = {l.alphabet for l in w}
        if len(alph) > 1:
            raise AlphabetError(f"mixed alphabets in word: {sorted(alph)}")
        return w

    @property
    def alphabet(self) -> str | None:
        return self[0].alphabet if self else None

    def __add__(self, other):  # concatenation
        if not isinstance(other, tuple):
            return NotImplemented
        return Word(tuple.__add__(self, other))

    def __getitem__(self, item):
        r = tuple.__getitem__(self, item)
        return Word(r) if isinstance(item, slice) else r

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __str__(self) -> str:
        return " ".join(str(l) for l in self) if self else "1"

    @property
    def weight(self) -> int:
        return weight(self)

    @property
    def depth(self) -> int:
        return depth(self)


EMPTY = Word()


def weight(w: Word) -> int:
    """Weight grading: y_k -> k, y_{k,m} -> k+m, b_s -> max(s, 1), x/p/y -> 1."""
    total = 0
    for l in w:
        a = l.alphabet
        if a == Y:
            total += l.idx[0]
        elif a == YBI:
            total += l.idx[0] + l.idx[1]
        elif a == B:
            total += l.idx[0] if l.idx[0] else 1
        else:
            total += 1
    return total


def depth(w: Word) -> int:
    """Depth grading: the number of letters, except that b_0 has depth 0
    (and for X01 words, the number of x_1)."""
    a = w.alphabet if isinstance(w, Word) else (w[0].alphabet if w else None)
    if a == B:
        return sum(1 for l in w if l.idx[0] != 0)
    if a == X01:
        return sum(1 for l in w if l.idx[0] == 1)
    if a == PY:
        return sum(1 for l in w if l.idx[0] == "y")
    return len(w)


def sort_key(key) -> tuple:
    """Canonical order: by total weight, then lexicographically on letters."""
    if isinstance(key, Word):
        return (weight(key), tuple(key))
    return (sum(weight(w) for w in key), tuple(tuple(w) for w in key))


class LinComb:
    """Finite formal rational linear combination of words (or word tuples).

    Instances are treated as immutable; all arithmetic returns new objects.
    Zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        d: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                if c:
                    v = d.get(k, 0) + c
                    if v:
                        d[k] = v
                    else:
                        d.pop(k, None)
        self._terms = {k: Fraction(v) for k, v in d.items()}
        self._hash = None

    @classmethod
    def from_word(cls, w, c: Number = 1) -> "LinComb":
        return cls({w: c})

    @classmethod
    def _raw(cls, d: dict) -> "LinComb":
        obj = cls.__new__(cls)
        obj._terms = d
        obj._hash = None
        return obj

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: sort_key(kv[0]))

    def __iter__(self) -> Iterator:
        return iter(k for k, _ in self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __getitem__(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def coefficient(self, key) -> Fraction:
        return self[key]

    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> "LinComb":
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if not isinstance(other, LinComb):
            return NotImplemented
        d = dict(self._terms)
        for k, c in other._terms.items():
            v = d.get(k, 0) + c
            if v:
                d[k] = v
            else:
                del d[k]
        return LinComb._raw(d)

    __radd__ = __add__

    def __neg__(self) -> "LinComb":
        return LinComb._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "LinComb":
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if not isinstance(other, LinComb):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LinComb":
        return (-self).__add__(other)

    def __mul__(self, c) -> "LinComb":
        if isinstance(c, (int, Fraction)):
            if not c:
                return LinComb._raw({})
            return LinComb._raw({k: v * c for k, v in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c) -> "LinComb":
        return self * (1 / Fraction(c))

    def map_keys(self, f) -> "LinComb":
        """Apply a word-to-word function termwise."""
        return LinComb((f(k), c) for k, c in self._terms.items())

    def map_linear(self, f) -> "LinComb":
        """Extend a word -> LinComb function linearly."""
        out: dict = {}
        for k, c in self._terms.items():
            for k2, c2 in f(k)._terms.items():
                v = out.get(k2, 0) + c * c2
                if v:
                    out[k2] = v
                else:
                    out.pop(k2, None)
        return LinComb._raw(out)

    @property
    def alphabet(self) -> str | None:
        alph = set()
        for k in self._terms:
            for w in (k,) if isinstance(k, Word) else k:
                if w.alphabet:
                    alph.add(w.alphabet)
        if len(alph) > 1:
            raise AlphabetError(f"mixed alphabets: {sorted(alph)}")
        return alph.pop() if alph else None

    def __repr__(self) -> str:
        return f"LinComb({format_lincomb(self)!r})"

    def __str__(self) -> str:
        return format_lincomb(self)

    def to_json(self) -> dict:
        return {_key_text(k): _frac_text(c) for k, c in self.items()}


ZERO = LinComb()
ONE = LinComb({EMPTY: 1})


def as_lincomb(x) -> LinComb:
    if isinstance(x, LinComb):
        return x
    if isinstance(x, Word):
        return LinComb({x: 1})
    if isinstance(x, str):
        return parse_lincomb(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a linear combination")


def _same_alphabet(u: LinComb, v: LinComb) -> None:
    a, c = u.alphabet, v.alphabet
    if a and c and a != c:
        raise AlphabetError(f"alphabet mismatch: {a} vs {c}")


def concat(u, v) -> LinComb:
    """Bilinear extension of word concatenation."""
    u, v = as_lincomb(u), as_lincomb(v)
    _same_alphabet(u, v)
    out: dict = {}
    for w1, c1 in u._terms.items():
        for w2, c2 in v._terms.items():
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
    return LinComb(out)


def delta_dec(w) -> LinComb:
    """Deconcatenation coproduct; tensors are keyed by pairs of words."""
    if isinstance(w, LinComb):
        return w.map_linear(delta_dec)
    w = Word(w)
    return LinComb._raw({(w[:i], w[i:]): Fraction(1) for i in range(len(w) + 1)})


def tensor_map(t: LinComb, f, g=None) -> LinComb:
    """Apply (f ⊗ g) to a tensor, where f and g map words to LinCombs."""
    g = g or f
    out = LinComb()
    for (a, c_), coef in t._terms.items():
        fa, gc = f(a), g(c_)
        d: dict = {}
        for k1, v1 in fa._terms.items():
            for k2, v2 in gc._terms.items():
                d[(k1, k2)] = d.get((k1, k2), 0) + coef * v1 * v2
        out = out + LinComb(d)
    return out


def tensor_product(t1: LinComb, t2: LinComb, mul1, mul2=None) -> LinComb:
    """Product of two tensors, legwise with the given word products."""
    mul2 = mul2 or mul1
    out: dict = {}
    for (a1, a2), c in t1._terms.items():
        for (b1, b2), e in t2._terms.items():
            p1, p2 = mul1(a1, b1), mul2(a2, b2)
            for k1, v1 in p1._terms.items():
                for k2, v2 in p2._terms.items():
                    key = (k1, k2)
                    out[key] = out.get(key, 0) + c * e * v1 * v2
    return LinComb(out)


# --- enumeration -----------------------------------------------------------

def b_words(wt: int, max_depth: int | None = None, convergent: bool = False) -> list[Word]:
    """All B-words of exact weight ``wt`` (optionally bounded depth).

    With ``convergent`` only words not starting with b_0 are returned.
    """
    out: list[Word] = []

    def rec(rem: int, prefix: list, dep: int):
        if rem == 0:
            out.append(Word(prefix))
            return
        for s in range(0, rem + 1):
            if s == 0 and convergent and not prefix:
                continue
            nd = dep + (s != 0)
            if max_depth is not None and nd > max_depth:
                continue
            prefix.append(Letter(B, (s,)))
            rec(rem - (s if s else 1), prefix, nd)
            prefix.pop()

    rec(wt, [], 0)
    return sorted(out, key=sort_key)


def ybi_words(wt: int, max_depth: int | None = None) -> list[Word]:
    """All Ybi-words of exact weight ``wt``."""
    out: list[Word] = []

    def rec(rem: int, prefix: list):
        if rem == 0:
            out.append(Word(prefix))
            return
        if max_depth is not None and len(prefix) >= max_depth:
            return
        for k in range(1, rem + 1):
            for m in range(0, rem - k + 1):
                prefix.append(Letter(YBI, (k, m)))
                rec(rem - k - m, prefix)
                prefix.pop()

    rec(wt, [])
    return sorted(out, key=sort_key)


def y_words(wt: int, max_depth: int | None = None) -> list[Word]:
    out: list[Word] = []

    def rec(rem: int, prefix: list):
        if rem == 0:
            out.append(Word(prefix))
            return
        if max_depth is not None and len(prefix) >= max_depth:
            return
        for k in range(1, rem + 1):
            prefix.append(Letter(Y, (k,)))
            rec(rem - k, prefix)
            prefix.pop()

    rec(wt, [])
    return sorted(out, key=sort_key)


def b_blocks(w: Word) -> list[tuple[int, int]]:
    """Split a word b_{k1} b0^{m1} ... b_{kd} b0^{md} into [(k_i, m_i)].

    The word must not start with b_0.
    """
    blocks: list[list[int]] = []
    for l in w:
        s = l.idx[0]
        if s:
            blocks.append([s, 0])
        else:
            if not blocks:
                raise ValueError(f"word starts with b0: {w}")
            blocks[-1][1] += 1
    return [(k, m) for k, m in blocks]


def from_b_blocks(blocks) -> Word:
    letters: list[Letter] = []
    for k, m in blocks:
        letters.append(Letter(B, (k,)))
        letters.extend([Letter(B, (0,))] * m)
    return Word(letters)


def z(*s: int) -> Word:
    """The B-word b_{s1} ... b_{sl}."""
    return Word(Letter(B, (i,)) for i in s)


# --- text syntax -----------------------------------------------------------

_LETTER_RE = re.compile(
    r"\s*(?:"
    r"(?P<z>z\(\s*\d+(?:\s*,\s*\d+)*\s*\))"
    r"|y\(\s*(?P<yk>\d+)\s*\|\s*(?P<ym>\d+)\s*\)"
    r"|b(?P<b>\d+)"
    r"|y(?P<y>\d+)"
    r"|x(?P<x>[01])"
    r"|(?P<py>[py]+)(?![\w(])"
    r"|(?P<one>1)(?![\d/])"
    r")"
)


def _parse_word_at(text: str, pos: int) -> tuple[Word, int]:
    letters: list[Letter] = []
    saw_any = False
    while True:
        m = _LETTER_RE.match(text, pos)
        if not m or m.end() == pos:
            break
        g = m.groupdict()
        if g["z"]:
            nums = re.findall(r"\d+", g["z"])
            letters.extend(Letter(B, (int(n),)) for n in nums)
        elif g["yk"] is not None:
            try:
                letters.append(letter(YBI, int(g["yk"]), int(g["ym"])))
            except AlphabetError as e:
                raise ParseError(str(e), text, m.start()) from None
        elif g["b"] is not None:
            letters.append(Letter(B, (int(g["b"]),)))
        elif g["y"] is not None:
            try:
                letters.append(letter(Y, int(g["y"])))
            except AlphabetError as e:
                raise ParseError(str(e), text, m.start()) from None
        elif g["x"] is not None:
            letters.append(Letter(X01, (int(g["x"]),)))
        elif g["py"]:
            letters.extend(Letter(PY, (ch,)) for ch in g["py"])
        elif g["one"]:
            if letters:
                raise ParseError("unit '1' inside a word", text, m.start("one"))
        saw_any = True
        pos = m.end()
    if not saw_any:
        raise ParseError("expected a word", text, pos + len(text[pos:]) - len(text[pos:].lstrip()))
    try:
        return Word(letters), pos
    except AlphabetError as e:
        raise ParseError(str(e), text, pos) from None


def parse_word(text: str) -> Word:
    """Parse ``b3 b0 b2``, ``z(3,0,2)``, ``y(3|1) y(2|0)``, ``y2 y1``,
    ``x0 x1``, ``p y p`` / ``pyp`` or ``1`` (empty word)."""
    w, pos = _parse_word_at(text, 0)
    if text[pos:].strip():
        raise ParseError("unexpected trailing input", text, pos + len(text[pos:]) - len(text[pos:].lstrip()))
    return w


_COEF_RE = re.compile(r"\s*(?P<num>\d+)(?:\s*/\s*(?P<den>\d+))?\s*\*")
_SIGN_RE = re.compile(r"\s*([+-])")


def parse_lincomb(text: str) -> LinComb:
    """Parse a combination such as ``2*b1 b1 + b2`` or ``-1/2*y(1|0) + 1``."""
    pos = 0
    terms: dict = {}
    first = True
    n = len(text)
    while True:
        if not text[pos:].strip():
            if first:
                raise ParseError("empty expression", text, pos)
            break
        sign = 1
        m = _SIGN_RE.match(text, pos)
        if m:
            sign = -1 if m.group(1) == "-" else 1
            pos = m.end()
        elif not first:
            raise ParseError("expected '+' or '-'", text, pos)
        coef = Fraction(1)
        m = _COEF_RE.match(text, pos)
        if m:
            coef = Fraction(int(m.group("num")), int(m.group("den") or 1))
            pos = m.end()
        w, pos = _parse_word_at(text, pos)
        terms[w] = terms.get(w, 0) + sign * coef
        first = False
        if pos >= n:
            break
    return LinComb(terms)


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _key_text(k) -> str:
    if isinstance(k, Word):
        return str(k)
    return " ⊗ ".join(str(w) for w in k)


def format_lincomb(lc: LinComb) -> str:
    items = lc.items()
    if not items:
        return "0"
    parts = []
    for i, (k, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = _key_text(k)
        if a != 1:
            body = f"{_frac_text(a)}*{body}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)
