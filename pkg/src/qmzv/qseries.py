"""Truncated q-series with exact rational coefficients, Bernoulli numbers,
generic multiple q-zeta values as nested sums, and a partition-based
generating series used as an independent oracle."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .words import ParseError

DEFAULT_ORDER = 50

Number = Union[int, Fraction]


class DivergentError(ValueError):
    """Input outside the convergent range of a generic q-zeta value."""


class QSeries:
    """c_0 + c_1 q + ... + c_N q^N + O(q^{N+1}).

    Arithmetic between series of different orders truncates to the smaller
    order.  Equality compares coefficients up to the smaller order.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = (), order: int | None = None):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        elif not cs:
            cs = [Fraction(0)]
        self.coeffs = cs

    @classmethod
    def _raw(cls, cs: list) -> "QSeries":
        obj = cls.__new__(cls)
        obj.coeffs = cs
        return obj

    @classmethod
    def constant(cls, c: Number, order: int) -> "QSeries":
        return cls([c], order)

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls._raw([Fraction(0)] * (order + 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        if n > self.order:
            raise IndexError(f"coefficient q^{n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError(f"cannot raise truncation order {self.order} to {order}")
        return QSeries._raw(self.coeffs[: order + 1])

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def _coerce(self, other) -> "QSeries | None":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries([other], self.order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order) + 1
        a, b = self.coeffs, o.coeffs
        return QSeries._raw([a[i] + b[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order) + 1
        a, b = self.coeffs, o.coeffs
        return QSeries._raw([a[i] - b[i] for i in range(n)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return QSeries.zero(self.order)
            return QSeries._raw([c * other for c in self.coeffs])
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return QSeries._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return self * (1 / Fraction(c))
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = QSeries([1], self.order)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, QSeries) else other
        if o is None:
            return NotImplemented
        n = min(self.order, o.order) + 1
        return self.coeffs[:n] == o.coeffs[:n]

    __hash__ = None

    def __repr__(self) -> str:
        return f"QSeries({format_qseries(self)!r}, order={self.order})"

    def __str__(self) -> str:
        return format_qseries(self)

    def to_json(self) -> list:
        return [_frac_text(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: list) -> "QSeries":
        return cls([Fraction(s) for s in data])

    def qderiv(self) -> "QSeries":
        return qderiv(self)

    def __call__(self, q0: float) -> float:
        return eval_float(self, q0)


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_qseries(f: QSeries) -> str:
    parts = []
    for n, c in enumerate(f.coeffs):
        if not c:
            continue
        a = abs(c)
        if n == 0:
            body = _frac_text(a)
        else:
            mono = "q" if n == 1 else f"q^{n}"
            if a == 1:
                body = mono
            elif a.denominator == 1:
                body = f"{a.numerator}{mono}"
            else:
                body = f"({_frac_text(a)}){mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:\((?P<pn>\d+)\s*/\s*(?P<pd>\d+)\)|(?P<n>\d+)(?:\s*/\s*(?P<d>\d+))?)?"
    r"\s*\*?\s*(?P<q>q(?:\^(?P<e>\d+))?)?"
)


def parse_qseries(text: str, order: int | None = None) -> QSeries:
    """Parse the text produced by ``format_qseries``.  The order defaults to
    the highest exponent present."""
    pos, terms = 0, {}
    text = text.strip()
    if text == "0":
        return QSeries([0], order or 0)
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos or (not m.group("q") and m.group("n") is None and m.group("pn") is None):
            raise ParseError("malformed q-series term", text, pos)
        if not first and not m.group("sign"):
            raise ParseError("expected '+' or '-'", text, pos)
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("pn"):
            c = Fraction(int(m.group("pn")), int(m.group("pd")))
        elif m.group("n") is not None:
            c = Fraction(int(m.group("n")), int(m.group("d") or 1))
        else:
            c = Fraction(1)
        e = 0
        if m.group("q"):
            e = int(m.group("e") or 1)
        terms[e] = terms.get(e, 0) + sign * c
        pos = m.end()
        first = False
    top = max(terms) if terms else 0
    n = top if order is None else order
    cs = [Fraction(0)] * (n + 1)
    for e, c in terms.items():
        if e <= n:
            cs[e] = c
    return QSeries._raw(cs)


def qderiv(f: QSeries) -> QSeries:
    """q d/dq."""
    return QSeries._raw([n * c for n, c in enumerate(f.coeffs)])


def eval_float(f: QSeries, q0: float) -> float:
    """Horner evaluation of the truncated polynomial at q0."""
    acc = 0.0
    for c in reversed(f.coeffs):
        acc = acc * q0 + float(c)
    return acc


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    s = sum(math.comb(n + 1, k) * bernoulli(k) for k in range(n))
    return -s / (n + 1)


# --- generic multiple q-zeta values -----------------------------------------

def _poly_eval_shift(R: Sequence[Number], s: int, n: int, order: int) -> list:
    """Coefficients of R(q^n) / (1 - q^n)^s up to q^order (list of Fractions)."""
    out = [Fraction(0)] * (order + 1)
    # (1-x)^{-s} = sum_i C(s+i-1, i) x^i
    for a, r in enumerate(R):
        if not r:
            continue
        r = Fraction(r)
        i = 0
        while (a + i) * n <= order:
            c = math.comb(s + i - 1, i) if s else (1 if i == 0 else 0)
            if c:
                out[(a + i) * n] += r * c
            elif s == 0:
                break
            i += 1
    return out


def generic_qzeta(s: Sequence[int], R: Sequence[Sequence[Number]], order: int = DEFAULT_ORDER,
                  check_membership: bool = False) -> QSeries:
    """sum_{n1 > ... > nl > 0} prod_j R_j(q^{n_j}) / (1 - q^{n_j})^{s_j}.

    ``R`` holds coefficient lists [r_0, r_1, ...] of polynomials in t.
    """
    s = list(s)
    R = [list(r) for r in R]
    if len(s) != len(R):
        raise ValueError("s and R must have equal length")
    if not s:
        return QSeries([1], order)
    if s[0] < 1 or (R[0] and R[0][0]):
        raise DivergentError("need s_1 >= 1 and R_1(0) = 0")
    if any(v < 0 for v in s):
        raise DivergentError("indices must be nonnegative")
    if check_membership:
        for sj, r in zip(s, R):
            deg = max((i for i, c in enumerate(r) if c), default=0)
            if deg > sj:
                raise ValueError(f"deg R = {deg} exceeds s = {sj}")
    l = len(s)
    N = order
    # cum[j] = sum over n_j < current n of (factor_j(n_j) * inner_{j+1}(n_j))
    cum = [[Fraction(0)] * (N + 1) for _ in range(l + 1)]
    cum[l] = [Fraction(1)] + [Fraction(0)] * N  # empty inner sum is 1
    for n in range(1, N + 1):
        new = []
        for j in range(l - 1, -1, -1):
            f = _poly_eval_shift(R[j], s[j], n, N)
            inner = cum[j + 1] if j + 1 < l else cum[l]
            prod = [Fraction(0)] * (N + 1)
            for a, fa in enumerate(f):
                if fa:
                    for b_ in range(N + 1 - a):
                        if inner[b_]:
                            prod[a + b_] += fa * inner[b_]
            new.append((j, prod))
        for j, prod in new:
            cum[j] = [x + y for x, y in zip(cum[j], prod)]
    return QSeries._raw(cum[0])


def divisor_sum_series(a: int, b: int, order: int) -> list:
    """Integer coefficients of sum_{u, v > 0} u^a v^b q^{uv} up to q^order."""
    out = [0] * (order + 1)
    for u in range(1, order + 1):
        ua = u ** a
        for v in range(1, order // u + 1):
            out[u * v] += ua * v ** b
    return out


def _beta_depth1(k: int) -> Fraction:
    if k >= 2 and k % 2 == 0:
        return -bernoulli(k) / (2 * math.factorial(k))
    return Fraction(0)


def depth1_balanced_closed_form(k: int, m: int, order: int = DEFAULT_ORDER) -> QSeries:
    """The depth-one value zeta_q(k, {0}^m):

        delta_{m,0} beta(k) + delta_{k,1} beta(m+1)
            + 1/((k-1)! m!) sum_{u,v>0} u^m v^{k-1} q^{uv}

    with beta(j) = -B_j/(2 j!) for even j and 0 for odd j.
    """
    if k < 1 or m < 0:
        raise ValueError("need k >= 1 and m >= 0")
    const = Fraction(0)
    if m == 0:
        const += _beta_depth1(k)
    if k == 1:
        const += _beta_depth1(m + 1)
    scale = Fraction(1, math.factorial(k - 1) * math.factorial(m))
    cs = [Fraction(c) * scale for c in divisor_sum_series(m, k - 1, order)]
    cs[0] = const
    return QSeries._raw(cs)


def partition_gen(exps: Sequence[int], d: int, order: int = DEFAULT_ORDER) -> QSeries:
    """Gen_f(q) = sum_N sum_{lambda in P(N, d)} f(lambda) q^N for the monomial
    f = X_1^{a_1} .. X_d^{a_d} Y_1^{b_1} .. Y_d^{b_d}, exps = (a_1, b_1, ..., a_d, b_d).

    A partition with exactly d distinct part sizes i_1 > ... > i_d (with
    multiplicities m_{i_j}) is evaluated at X_j = i_j, Y_j = m_{i_j}.
    """
    from sympy.utilities.iterables import partitions

    if len(exps) != 2 * d:
        raise ValueError("need 2d exponents")
    cs = [Fraction(0)] * (order + 1)
    for n in range(1, order + 1):
        total = 0
        for p in partitions(n):
            if len(p) != d:
                continue
            parts = sorted(p.items(), reverse=True)
            val = 1
            for j, (i, mult) in enumerate(parts):
                val *= i ** exps[2 * j] * mult ** exps[2 * j + 1]
            total += val
        cs[n] = Fraction(total)
    return QSeries._raw(cs)


def delta_series(order: int) -> QSeries:
    """The discriminant q prod_{n>=1} (1 - q^n)^24."""
    cs = [0] * (order + 1)
    if order >= 1:
        cs[1] = 1
    for n in range(1, order + 1):
        for _ in range(24):
            for i in range(order, n - 1, -1):
                cs[i] -= cs[i - n]
    return QSeries(cs)
