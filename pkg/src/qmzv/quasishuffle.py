"""Quasi-shuffle products on words.

A quasi-shuffle product is fixed by a commutative, associative "diamond"
product on letters:

    au * bv = a(u * bv) + b(au * v) + (a<>b)(u * v)

Instances provided: the shuffle product (no diamond term), the stuffle
products on Y and Ybi (indices add), the balanced product on B
(b_i <> b_j = b_{i+j} only when i, j >= 1), and the product on {p, y}
words used by the embedding of B-words.
"""

from __future__ import annotations

import enum
import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .words import (
    B, PY, X01, Y, YBI, EMPTY, AlphabetError, Letter, LinComb, Word,
    as_lincomb, delta_dec, tensor_product,
)


class ProductId(enum.Enum):
    SHUFFLE = "shuffle"
    STUFFLE_Y = "stuffle"
    STUFFLE_YBI = "stuffle-bi"
    BALANCED_B = "balanced"
    SHUFFLE_B_PY = "shuffle-py"


def _no_diamond(a: Letter, b: Letter) -> Optional[Letter]:
    return None


def _stuffle_y(a: Letter, b: Letter) -> Optional[Letter]:
    return Letter(Y, (a.idx[0] + b.idx[0],))


def _stuffle_ybi(a: Letter, b: Letter) -> Optional[Letter]:
    return Letter(YBI, (a.idx[0] + b.idx[0], a.idx[1] + b.idx[1]))


def _balanced(a: Letter, b: Letter) -> Optional[Letter]:
    i, j = a.idx[0], b.idx[0]
    if i and j:
        return Letter(B, (i + j,))
    return None


@dataclass(frozen=True)
class ProductInstance:
    id: ProductId
    alphabets: tuple
    rule: Callable[[Letter, Letter], Optional[Letter]] = field(compare=False)

    def __str__(self) -> str:
        return self.id.value


SHUFFLE = ProductInstance(ProductId.SHUFFLE, (X01, Y, YBI, B), _no_diamond)
STUFFLE_Y = ProductInstance(ProductId.STUFFLE_Y, (Y,), _stuffle_y)
STUFFLE_YBI = ProductInstance(ProductId.STUFFLE_YBI, (YBI,), _stuffle_ybi)
BALANCED_B = ProductInstance(ProductId.BALANCED_B, (B,), _balanced)
SHUFFLE_B_PY = ProductInstance(ProductId.SHUFFLE_B_PY, (PY,), _no_diamond)

INSTANCES = {p.id.value: p for p in (SHUFFLE, STUFFLE_Y, STUFFLE_YBI, BALANCED_B, SHUFFLE_B_PY)}


def instance(name) -> ProductInstance:
    if isinstance(name, ProductInstance):
        return name
    if isinstance(name, ProductId):
        name = name.value
    try:
        return INSTANCES[name]
    except KeyError:
        raise ValueError(f"unknown product {name!r}; choose from {sorted(INSTANCES)}") from None


def check_diamond(inst: ProductInstance, letters: Iterable[Letter]) -> bool:
    """Commutativity and associativity of the diamond rule on a letter pool."""
    pool = list(letters)

    def dia(a, b):
        return None if a is None or b is None else inst.rule(a, b)

    for a, b in itertools.product(pool, repeat=2):
        if inst.rule(a, b) != inst.rule(b, a):
            return False
    for a, b, c in itertools.product(pool, repeat=3):
        if dia(dia(a, b), c) != dia(a, dia(b, c)):
            return False
    return True


# --- word-level engines (memoized, return plain dicts with int coefficients)

_lock = threading.Lock()
_memo: dict = {}


def _add(d: dict, k, c) -> None:
    v = d.get(k, 0) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


def _prefix(a: Letter, d: dict, out: dict, mult: int = 1) -> None:
    for w, c in d.items():
        _add(out, (a,) + w, c * mult)


def _qsh_words(inst: ProductInstance, u: tuple, v: tuple) -> dict:
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    if v < u:
        u, v = v, u
    key = (inst.id, u, v)
    r = _memo.get(key)
    if r is not None:
        return r
    out: dict = {}
    a, b = u[0], v[0]
    _prefix(a, _qsh_words(inst, u[1:], v), out)
    _prefix(b, _qsh_words(inst, u, v[1:]), out)
    ab = inst.rule(a, b)
    if ab is not None:
        _prefix(ab, _qsh_words(inst, u[1:], v[1:]), out)
    with _lock:
        _memo[key] = out
    return out


_P, _Yl = Letter(PY, ("p",)), Letter(PY, ("y",))


def _py_words(u: tuple, v: tuple) -> dict:
    # y at the front of either argument is absorbed; two leading p's follow
    # the quasi-shuffle pattern with a merge term when both tails start with y
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    key = ("py", u, v)
    r = _memo.get(key)
    if r is not None:
        return r
    out: dict = {}
    if u[0] == _Yl:
        _prefix(_Yl, _py_words(u[1:], v), out)
    elif v[0] == _Yl:
        _prefix(_Yl, _py_words(u, v[1:]), out)
    else:
        uu, vv = u[1:], v[1:]
        _prefix(_P, _py_words(uu, v), out)
        _prefix(_P, _py_words(u, vv), out)
        if uu and vv and uu[0] == _Yl and vv[0] == _Yl:
            _prefix(_P, _py_words(uu, vv), out)
    with _lock:
        _memo[key] = out
    return out


def _check_args(inst: ProductInstance, u: LinComb, v: LinComb) -> None:
    for x in (u, v):
        a = x.alphabet
        if a is not None and a not in inst.alphabets:
            raise AlphabetError(f"product {inst} does not act on alphabet {a}")
    a, b = u.alphabet, v.alphabet
    if a and b and a != b:
        raise AlphabetError(f"alphabet mismatch: {a} vs {b}")


def _bilinear(engine, u: LinComb, v: LinComb) -> LinComb:
    out: dict = {}
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            for w, c in engine(tuple(w1), tuple(w2)).items():
                _add(out, w, c1 * c2 * c)
    return LinComb((Word(w), c) for w, c in out.items())


def qshuffle(inst, u, v) -> LinComb:
    """Quasi-shuffle product of two linear combinations (or words)."""
    inst = instance(inst)
    u, v = as_lincomb(u), as_lincomb(v)
    _check_args(inst, u, v)
    if inst.id is ProductId.SHUFFLE_B_PY:
        return _bilinear(_py_words, u, v)
    return _bilinear(lambda a, b: _qsh_words(inst, a, b), u, v)


def qshuffle_py(u, v) -> LinComb:
    """The product on {p, y}-words compatible with the embedding of B-words."""
    return qshuffle(SHUFFLE_B_PY, u, v)


def qshuffle_power(inst, w, n: int) -> LinComb:
    """w * w * ... * w (n factors); n = 0 gives the unit."""
    out = LinComb({EMPTY: 1})
    for _ in range(n):
        out = qshuffle(inst, out, w)
    return out


@dataclass
class BialgebraReport:
    product: str
    checked: int
    passed: bool
    failures: list

    def __bool__(self) -> bool:
        return self.passed


def check_bialgebra(inst, sample: Iterable) -> BialgebraReport:
    """Check Δ(u*v) = Δ(u) (*⊗*) Δ(v) for all pairs from the sample."""
    inst = instance(inst)
    words = [Word(w) if not isinstance(w, Word) else w for w in sample]
    mul = lambda a, b: qshuffle(inst, a, b)
    failures = []
    n = 0
    for u in words:
        for v in words:
            n += 1
            lhs = delta_dec(qshuffle(inst, u, v))
            rhs = tensor_product(delta_dec(u), delta_dec(v), mul)
            if lhs != rhs:
                failures.append((u, v))
    return BialgebraReport(str(inst), n, not failures, failures)
