"""Truncated bimoulds: families M_d(X_1..X_d; Y_1..Y_d) of polynomials,
with the variable substitutions #_Y, swap and tau, the mould product, and
checks of the product symmetries (symmetril and b-symmetril).

Truncation is by total degree.  A bimould carries a weight bound W and its
depth-d part is known exactly in total degree <= W - d.  All substitutions
used here are linear and homogeneous, so they preserve the window exactly.

Variables of a depth-d part are ordered X_1, Y_1, ..., X_d, Y_d; the
exponent tuple of a monomial follows the same order.

Coefficients may be Fractions, QSeries or LinCombs (anything supporting +,
- and multiplication by Fractions).  Products of coefficients use ``*``
unless a ``coeff_mul`` is supplied.
"""

from __future__ import annotations

import enum
import math
import operator
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable

from .qseries import QSeries


class TruncationError(ValueError):
    """A result was requested outside the exactly known degree window."""


class DividedDifferenceError(ArithmeticError):
    """A divided difference numerator was not divisible."""


def xv(i: int) -> int:
    """Index of X_i (1-based) in the exponent tuple."""
    return 2 * (i - 1)


def yv(i: int) -> int:
    return 2 * (i - 1) + 1


def _is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return not c


class TruncPoly:
    """Sparse polynomial {exponent tuple: coefficient}, exact in total
    degree <= ``degree``."""

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars: int, degree: int, terms: dict | None = None):
        self.nvars = nvars
        self.degree = degree
        t: dict = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError("exponent length mismatch")
                if sum(e) <= degree and not _is_zero(c):
                    t[e] = c
        self.terms = t

    @classmethod
    def _raw(cls, nvars: int, degree: int, terms: dict) -> "TruncPoly":
        obj = cls.__new__(cls)
        obj.nvars, obj.degree, obj.terms = nvars, degree, terms
        return obj

    @classmethod
    def constant(cls, c, nvars: int = 0, degree: int = 0) -> "TruncPoly":
        return cls(nvars, degree, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int, degree: int, c=Fraction(1)) -> "TruncPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, degree, {tuple(e): c})

    def copy(self) -> "TruncPoly":
        return TruncPoly._raw(self.nvars, self.degree, dict(self.terms))

    def coefficient(self, e: tuple, default=Fraction(0)):
        if sum(e) > self.degree:
            raise TruncationError(f"monomial {e} beyond degree window {self.degree}")
        return self.terms.get(tuple(e), default)

    def truncate(self, degree: int) -> "TruncPoly":
        if degree > self.degree:
            raise TruncationError(f"cannot extend degree window {self.degree} to {degree}")
        return TruncPoly._raw(self.nvars, degree,
                              {e: c for e, c in self.terms.items() if sum(e) <= degree})

    def homogeneous_part(self, g: int) -> dict:
        return {e: c for e, c in self.terms.items() if sum(e) == g}

    def _check(self, other: "TruncPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        deg = min(self.degree, other.degree)
        t = {e: c for e, c in self.terms.items() if sum(e) <= deg}
        for e, c in other.terms.items():
            if sum(e) > deg:
                continue
            if e in t:
                v = t[e] + c
                if _is_zero(v):
                    del t[e]
                else:
                    t[e] = v
            else:
                t[e] = c
        return TruncPoly._raw(self.nvars, deg, t)

    def __neg__(self) -> "TruncPoly":
        return TruncPoly._raw(self.nvars, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        return self + (-other)

    def scale(self, a) -> "TruncPoly":
        if _is_zero(a):
            return TruncPoly._raw(self.nvars, self.degree, {})
        return TruncPoly._raw(self.nvars, self.degree,
                              {e: c * a for e, c in self.terms.items()})

    def mul(self, other: "TruncPoly", coeff_mul: Callable | None = None,
            degree: int | None = None) -> "TruncPoly":
        self._check(other)
        deg = min(self.degree, other.degree)
        if degree is not None:
            deg = min(deg, degree)
        cm = coeff_mul or operator.mul
        t: dict = {}
        items2 = [(e, sum(e), c) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, d2, c2 in items2:
                if d1 + d2 > deg:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = cm(c1, c2)
                if e in t:
                    t[e] = t[e] + v
                else:
                    t[e] = v
        return TruncPoly._raw(self.nvars, deg, {e: c for e, c in t.items() if not _is_zero(c)})

    def __mul__(self, other):
        if isinstance(other, TruncPoly):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def embed(self, positions: Iterable[int], nvars: int) -> "TruncPoly":
        """Rename variable i to positions[i] in a space of nvars variables."""
        pos = list(positions)
        t = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, a in enumerate(e):
                ne[pos[i]] += a
            t[tuple(ne)] = c
        return TruncPoly._raw(nvars, self.degree, t)

    def substitute(self, forms: list, nvars: int) -> "TruncPoly":
        """Substitute variable i by the linear form forms[i] ({var: coef}).

        Because the forms are homogeneous of degree one the degree window is
        preserved.
        """
        if len(forms) != self.nvars:
            raise ValueError("need one linear form per variable")
        powers: dict = {}

        def power(i: int, a: int) -> dict:
            key = (i, a)
            if key not in powers:
                if a == 0:
                    powers[key] = {(0,) * nvars: Fraction(1)}
                else:
                    prev = power(i, a - 1)
                    new: dict = {}
                    for e, c in prev.items():
                        for var, f in forms[i].items():
                            ne = list(e)
                            ne[var] += 1
                            ne = tuple(ne)
                            new[ne] = new.get(ne, 0) + c * f
                    powers[key] = {e: c for e, c in new.items() if c}
            return powers[key]

        expansions: dict = {}
        t: dict = {}
        for e, c in self.terms.items():
            exp = expansions.get(e)
            if exp is None:
                exp = {(0,) * nvars: Fraction(1)}
                for i, a in enumerate(e):
                    if a:
                        p = power(i, a)
                        nxt: dict = {}
                        for e1, c1 in exp.items():
                            for e2, c2 in p.items():
                                k = tuple(x + y for x, y in zip(e1, e2))
                                nxt[k] = nxt.get(k, 0) + c1 * c2
                        exp = {k: v for k, v in nxt.items() if v}
                expansions[e] = exp
            for ne, f in exp.items():
                v = c * f
                if ne in t:
                    t[ne] = t[ne] + v
                else:
                    t[ne] = v
        return TruncPoly._raw(nvars, self.degree, {e: c for e, c in t.items() if not _is_zero(c)})

    def divided_difference(self, i: int, j: int) -> "TruncPoly":
        """Exact quotient self / (x_i - x_j); raises if not divisible.

        The quotient is exact in degree <= self.degree - 1.
        """
        t: dict = {}
        out_deg = self.degree - 1
        # P = sum_a P_a x_i^a where P_a are polynomials in the other variables;
        # Q = sum_a Q_a x_i^a with Q_{a-1} = P_a + x_j Q_a, top down.
        by_rest_i: dict = {}
        for e, c in self.terms.items():
            key = e[:i] + e[i + 1:]
            by_rest_i.setdefault(e[i], {})[key] = c
        if not by_rest_i:
            return TruncPoly._raw(self.nvars, max(out_deg, -1), {})
        jj = j if j < i else j - 1
        top = max(by_rest_i)
        Q: dict = {}
        qa: dict = {}
        for a in range(top, 0, -1):
            pa = by_rest_i.get(a, {})
            shifted = {}
            for key, c in qa.items():
                nk = list(key)
                nk[jj] += 1
                shifted[tuple(nk)] = c
            new = dict(pa)
            for key, c in shifted.items():
                if key in new:
                    v = new[key] + c
                    if _is_zero(v):
                        del new[key]
                    else:
                        new[key] = v
                else:
                    new[key] = c
            qa = new
            Q[a - 1] = qa
        # remainder: P_0 + x_j Q_0 must vanish (within the degree window)
        rem = dict(by_rest_i.get(0, {}))
        for key, c in Q.get(0, {}).items():
            nk = list(key)
            nk[jj] += 1
            nk = tuple(nk)
            if nk in rem:
                v = rem[nk] + c
                if _is_zero(v):
                    del rem[nk]
                else:
                    rem[nk] = v
            else:
                rem[nk] = c
        bad = {k: c for k, c in rem.items() if sum(k) <= self.degree and not _is_zero(c)}
        if bad:
            raise DividedDifferenceError(f"numerator not divisible by x{i} - x{j}")
        for a, qa in Q.items():
            for key, c in qa.items():
                e = key[:i] + (a,) + key[i:]
                if sum(e) <= out_deg and not _is_zero(c):
                    t[e] = c
        return TruncPoly._raw(self.nvars, out_deg, t)

    def map_coefficients(self, f: Callable) -> "TruncPoly":
        t = {}
        for e, c in self.terms.items():
            v = f(c)
            if not _is_zero(v):
                t[e] = v
        return TruncPoly._raw(self.nvars, self.degree, t)

    def equal_within(self, other: "TruncPoly", degree: int | None = None):
        """Return None if equal up to the common window, else the first
        differing monomial (in sorted order)."""
        self._check(other)
        deg = min(self.degree, other.degree)
        if degree is not None:
            deg = min(deg, degree)
        keys = sorted(set(self.terms) | set(other.terms), key=lambda e: (sum(e), e))
        for e in keys:
            if sum(e) > deg:
                continue
            a = self.terms.get(e, 0)
            b = other.terms.get(e, 0)
            diff = a - b
            if not _is_zero(diff):
                return e
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.equal_within(other) is None

    __hash__ = None

    def __repr__(self) -> str:
        return f"TruncPoly(nvars={self.nvars}, degree={self.degree}, terms={len(self.terms)})"


# --- bimoulds ---------------------------------------------------------------

class TruncBimould:
    """A bimould truncated to weight W: depth parts d = 0..depth_bound, the
    depth-d part being exact in total degree <= W - d."""

    def __init__(self, parts: dict, weight: int, depth_bound: int | None = None):
        self.weight = weight
        self.parts: dict[int, TruncPoly] = {}
        for d, p in parts.items():
            if p.nvars != 2 * d:
                raise ValueError(f"depth {d} part must have {2 * d} variables")
            deg = weight - d
            if p.degree < deg:
                raise TruncationError(f"depth {d} part known only to degree {p.degree} < {deg}")
            self.parts[d] = p.truncate(deg) if p.degree > deg else p
        self.depth_bound = max(self.parts) if depth_bound is None else depth_bound

    def __getitem__(self, d: int) -> TruncPoly:
        if d not in self.parts:
            if d > self.depth_bound:
                raise TruncationError(f"depth {d} beyond depth bound {self.depth_bound}")
            return TruncPoly(2 * d, self.weight - d)
        return self.parts[d]

    def degree(self, d: int) -> int:
        return self.weight - d

    def map_parts(self, f: Callable[[int, TruncPoly], TruncPoly]) -> "TruncBimould":
        return TruncBimould({d: f(d, p) for d, p in self.parts.items()}, self.weight, self.depth_bound)

    def map_coefficients(self, f: Callable) -> "TruncBimould":
        return self.map_parts(lambda d, p: p.map_coefficients(f))

    def coefficient(self, ks: tuple, ms: tuple, default=Fraction(0)):
        """Coefficient of X_1^{k_1-1} Y_1^{m_1} ... in the depth-len(ks) part."""
        d = len(ks)
        e = []
        for k, m in zip(ks, ms):
            e += [k - 1, m]
        return self[d].coefficient(tuple(e), default)

    def __add__(self, other: "TruncBimould") -> "TruncBimould":
        w = min(self.weight, other.weight)
        ds = set(self.parts) | set(other.parts)
        parts = {}
        for d in ds:
            a = self.parts.get(d)
            b = other.parts.get(d)
            parts[d] = a + b if a is not None and b is not None else (a or b).truncate(w - d)
        return TruncBimould(parts, w, min(self.depth_bound, other.depth_bound))

    def __sub__(self, other: "TruncBimould") -> "TruncBimould":
        return self + other.map_parts(lambda d, p: -p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncBimould):
            return NotImplemented
        for d in range(0, min(self.depth_bound, other.depth_bound) + 1):
            if self[d].equal_within(other[d]) is not None:
                return False
        return True

    __hash__ = None

    def __repr__(self) -> str:
        return f"TruncBimould(weight={self.weight}, depths={sorted(self.parts)})"

    # serialization: {d: {"e1,f1,...": "p/q" or [coeffs]}}
    def to_json(self) -> dict:
        out = {}
        for d, p in sorted(self.parts.items()):
            part = {}
            for e, c in sorted(p.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
                key = ",".join(map(str, e))
                if isinstance(c, QSeries):
                    part[key] = c.to_json()
                else:
                    c = Fraction(c)
                    part[key] = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            out[str(d)] = part
        return {"weight": self.weight, "parts": out}

    @classmethod
    def from_json(cls, data: dict) -> "TruncBimould":
        parts_data = data.get("parts", data)
        parts = {}
        maxd = 0
        raw: dict = {}
        for d_s, part in parts_data.items():
            if d_s == "weight":
                continue
            d = int(d_s)
            maxd = max(maxd, d)
            terms = {}
            for key, v in part.items():
                e = tuple(int(x) for x in key.split(",")) if key else ()
                terms[e] = QSeries.from_json(v) if isinstance(v, list) else Fraction(v)
            raw[d] = terms
        if "weight" in data:
            w = int(data["weight"])
        else:
            w = max((sum(e) + d for d, t in raw.items() for e in t), default=0)
        for d, terms in raw.items():
            parts[d] = TruncPoly(2 * d, w - d, terms)
        return cls(parts, w, maxd)


def unit_bimould(weight: int, depth_bound: int, one=Fraction(1)) -> TruncBimould:
    return TruncBimould({0: TruncPoly.constant(one, 0, weight)}, weight, depth_bound)


def _forms_hash(d: int, inverse: bool) -> list:
    forms = []
    for i in range(1, d + 1):
        forms.append({xv(i): Fraction(1)})
        if inverse:
            f = {yv(i): Fraction(1)}
            if i > 1:
                f[yv(i - 1)] = Fraction(-1)
        else:
            f = {yv(j): Fraction(1) for j in range(1, i + 1)}
        forms.append(f)
    return forms


def sub_hash_Y(M: TruncBimould) -> TruncBimould:
    """Y_i -> Y_1 + ... + Y_i."""
    return M.map_parts(lambda d, p: p.substitute(_forms_hash(d, False), 2 * d))


def sub_hash_Y_inv(M: TruncBimould) -> TruncBimould:
    """Y_i -> Y_i - Y_{i-1}."""
    return M.map_parts(lambda d, p: p.substitute(_forms_hash(d, True), 2 * d))


def _forms_swap(d: int) -> list:
    # X_i -> Y_1 + ... + Y_{d+1-i};  Y_1 -> X_d,  Y_i -> X_{d+1-i} - X_{d+2-i}
    forms = []
    for i in range(1, d + 1):
        forms.append({yv(j): Fraction(1) for j in range(1, d + 2 - i)})
        f = {xv(d + 1 - i): Fraction(1)}
        if i > 1:
            f[xv(d + 2 - i)] = Fraction(-1)
        forms.append(f)
    return forms


def _forms_tau(d: int) -> list:
    # X_i -> Y_{d+1-i}, Y_i -> X_{d+1-i}
    forms = []
    for i in range(1, d + 1):
        forms.append({yv(d + 1 - i): Fraction(1)})
        forms.append({xv(d + 1 - i): Fraction(1)})
    return forms


def swap_bimould(M: TruncBimould) -> TruncBimould:
    return M.map_parts(lambda d, p: p.substitute(_forms_swap(d), 2 * d))


def tau_bimould(M: TruncBimould) -> TruncBimould:
    return M.map_parts(lambda d, p: p.substitute(_forms_tau(d), 2 * d))


def mould_product(A: TruncBimould, B: TruncBimould, coeff_mul: Callable | None = None) -> TruncBimould:
    """C_d = sum_i A_i(X_1..X_i; Y_1..Y_i) B_{d-i}(X_{i+1}..; Y_{i+1}..)."""
    w = min(A.weight, B.weight)
    dmax = min(A.depth_bound, B.depth_bound)
    parts = {}
    for d in range(0, dmax + 1):
        acc = None
        for i in range(0, d + 1):
            if i not in A.parts or (d - i) not in B.parts:
                continue
            a = A.parts[i].embed(range(2 * i), 2 * d)
            b_ = B.parts[d - i].embed(range(2 * i, 2 * d), 2 * d)
            term = a.mul(b_, coeff_mul, degree=w - d)
            acc = term if acc is None else acc + term
        if acc is not None:
            parts[d] = acc.truncate(w - d) if acc.degree > w - d else acc
    return TruncBimould(parts, w, dmax)


# --- product recursions -----------------------------------------------------
# A "slot" of a term is (xs, ys): xs = (i,) for the plain variable X_i or
# (i, j) for the divided difference in the pair X_i, X_j; ys is a sorted
# tuple of Y-indices that are summed.

def _slot(i: int) -> tuple:
    return ((i,), (i,))


def _dd(a: tuple, b: tuple) -> tuple:
    # diamond of two plain slots: divided difference, Y's summed
    return ((a[0][0], b[0][0]), tuple(sorted(a[1] + b[1])))


def _add_term(out: dict, term: tuple, c: int) -> None:
    v = out.get(term, 0) + c
    if v:
        out[term] = v
    else:
        out.pop(term, None)


@lru_cache(maxsize=None)
def stuffle_terms(A: tuple, B: tuple) -> tuple:
    """Expansion of the product of generating series in variable blocks A
    and B under the stuffle recursion (from the left)."""
    if not A:
        return (((tuple(_slot(i) for i in B)), 1),)
    if not B:
        return (((tuple(_slot(i) for i in A)), 1),)
    out: dict = {}
    a, b = _slot(A[0]), _slot(B[0])
    for t, c in stuffle_terms(A[1:], B):
        _add_term(out, (a,) + t, c)
    for t, c in stuffle_terms(A, B[1:]):
        _add_term(out, (b,) + t, c)
    ab = _dd(a, b)
    for t, c in stuffle_terms(A[1:], B[1:]):
        _add_term(out, (ab,) + t, c)
    return tuple(sorted(out.items()))


def _balanced_rec(A: tuple, B: tuple) -> dict:
    # A and B are tuples of plain slots
    if not A:
        return {tuple(B): 1}
    if not B:
        return {tuple(A): 1}
    out: dict = {}
    an, bm = A[-1], B[-1]
    ysum = tuple(sorted(an[1] + bm[1]))
    la = (an[0], ysum)
    lb = (bm[0], ysum)
    ld = ((an[0][0], bm[0][0]), ysum)
    for t, c in _balanced_rec(A[:-1], B).items():
        _add_term(out, t + (la,), c)
    for t, c in _balanced_rec(A, B[:-1]).items():
        _add_term(out, t + (lb,), c)
    for t, c in _balanced_rec(A[:-1], B[:-1]).items():
        _add_term(out, t + (ld,), c)
    return out


@lru_cache(maxsize=None)
def balanced_terms(A: tuple, B: tuple) -> tuple:
    """Expansion of the product of generating series in variable blocks A
    and B under the balanced recursion (from the right).  Each peeled last
    letter carries the sum of the two last Y-variables."""
    return tuple(sorted(_balanced_rec(tuple(_slot(i) for i in A),
                                      tuple(_slot(i) for i in B)).items()))


def _eval_term(M: TruncBimould, term: tuple, nvars: int, degree: int) -> TruncPoly:
    """Evaluate M_{len(term)} at the slots of ``term`` in a space with
    nvars variables, expanding divided differences."""
    for pos, (xs, ys) in enumerate(term):
        if len(xs) == 2:
            i, j = xs
            t1 = term[:pos] + (((i,), ys),) + term[pos + 1:]
            t2 = term[:pos] + (((j,), ys),) + term[pos + 1:]
            num = _eval_term(M, t1, nvars, degree + 1) - _eval_term(M, t2, nvars, degree + 1)
            return num.divided_difference(xv(i), xv(j))
    d = len(term)
    forms = []
    for xs, ys in term:
        forms.append({xv(xs[0]): Fraction(1)})
        forms.append({yv(k): Fraction(1) for k in ys})
    p = M[d]
    if p.degree < degree:
        raise TruncationError(f"depth {d} known to degree {p.degree}, need {degree}")
    return p.truncate(degree).substitute(forms, nvars)


class Predicate(enum.Enum):
    SYMMETRIL = "symmetril"
    B_SYMMETRIL = "b-symmetril"
    SWAP_INV = "swap-invariant"
    TAU_INV = "tau-invariant"


@dataclass
class SymmetryReport:
    predicate: Predicate
    checked_depth: int
    checked_degree: int
    verdict: bool
    first_failure: dict | None = None
    checks: int = 0

    def __bool__(self) -> bool:
        return self.verdict

    def summary(self) -> str:
        v = "PASS" if self.verdict else "FAIL"
        s = (f"{self.predicate.value}: {v} (depth <= {self.checked_depth}, "
             f"degree window {self.checked_degree}, {self.checks} "
             f"{'identity' if self.checks == 1 else 'identities'})")
        if self.first_failure:
            s += f"; first failure at {self.first_failure}"
        return s


def _product_check(M: TruncBimould, depth: int | None, predicate: Predicate,
                   coeff_mul: Callable | None, degree: int | None) -> SymmetryReport:
    dmax = M.depth_bound if depth is None else min(depth, M.depth_bound)
    terms_fn = stuffle_terms if predicate is Predicate.SYMMETRIL else balanced_terms
    checks = 0
    min_window = None
    for d in range(2, dmax + 1):
        win = M.weight - d if degree is None else min(degree, M.weight - d)
        min_window = win if min_window is None else min(min_window, win)
        nv = 2 * d
        for n in range(1, d):
            A = tuple(range(1, n + 1))
            Bv = tuple(range(n + 1, d + 1))
            left = M[n].truncate(win).embed(range(2 * n), nv)
            right = M[d - n].truncate(win).embed(range(2 * n, nv), nv)
            lhs = left.mul(right, coeff_mul, degree=win)
            rhs = TruncPoly(nv, win)
            for term, c in terms_fn(A, Bv):
                rhs = rhs + _eval_term(M, term, nv, win).scale(Fraction(c))
            bad = lhs.equal_within(rhs, win)
            checks += 1
            if bad is not None:
                return SymmetryReport(predicate, d, win, False, {
                    "depth": d, "split": n, "monomial": bad,
                    "lhs": lhs.terms.get(bad, 0), "rhs": rhs.terms.get(bad, 0),
                }, checks)
    return SymmetryReport(predicate, dmax, min_window if min_window is not None else M.weight, True, None, checks)


def check_symmetril(M: TruncBimould, depth: int | None = None, coeff_mul: Callable | None = None,
                    degree: int | None = None) -> SymmetryReport:
    """Check the stuffle-type product identities for all splits n + m = d."""
    return _product_check(M, depth, Predicate.SYMMETRIL, coeff_mul, degree)


def check_b_symmetril(M: TruncBimould, depth: int | None = None, coeff_mul: Callable | None = None,
                      degree: int | None = None) -> SymmetryReport:
    """Check the balanced-type product identities for all splits n + m = d."""
    return _product_check(M, depth, Predicate.B_SYMMETRIL, coeff_mul, degree)


def _invariance_check(M: TruncBimould, op: Callable, predicate: Predicate,
                      depth: int | None, degree: int | None) -> SymmetryReport:
    dmax = M.depth_bound if depth is None else min(depth, M.depth_bound)
    N = op(M)
    checks = 0
    min_window = None
    for d in range(1, dmax + 1):
        win = M.weight - d if degree is None else min(degree, M.weight - d)
        min_window = win if min_window is None else min(min_window, win)
        bad = M[d].equal_within(N[d], win)
        checks += 1
        if bad is not None:
            return SymmetryReport(predicate, d, win, False, {
                "depth": d, "monomial": bad,
                "original": M[d].terms.get(bad, 0), "transformed": N[d].terms.get(bad, 0),
            }, checks)
    return SymmetryReport(predicate, dmax, min_window if min_window is not None else M.weight, True, None, checks)


def check_swap_inv(M: TruncBimould, depth: int | None = None, degree: int | None = None) -> SymmetryReport:
    return _invariance_check(M, swap_bimould, Predicate.SWAP_INV, depth, degree)


def check_tau_inv(M: TruncBimould, depth: int | None = None, degree: int | None = None) -> SymmetryReport:
    return _invariance_check(M, tau_bimould, Predicate.TAU_INV, depth, degree)


CHECKS = {
    Predicate.SYMMETRIL: check_symmetril,
    Predicate.B_SYMMETRIL: check_b_symmetril,
    Predicate.SWAP_INV: check_swap_inv,
    Predicate.TAU_INV: check_tau_inv,
}


def random_bimould(rng: random.Random, depth: int, weight: int, density: float = 0.6,
                   bound: int = 5) -> TruncBimould:
    """Random rational bimould with depth-0 part 1 (for property tests)."""
    parts = {0: TruncPoly.constant(Fraction(1), 0, weight)}
    for d in range(1, depth + 1):
        terms = {}
        for e in _monomials(2 * d, weight - d):
            if rng.random() < density:
                terms[e] = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        parts[d] = TruncPoly(2 * d, weight - d, terms)
    return TruncBimould(parts, weight, depth)


def _monomials(nvars: int, degree: int):
    def rec(i, rem):
        if i == nvars:
            yield ()
            return
        for a in range(rem + 1):
            for rest in rec(i + 1, rem - a):
                yield (a,) + rest
    return [e for e in rec(0, degree)]


monomials = _monomials
