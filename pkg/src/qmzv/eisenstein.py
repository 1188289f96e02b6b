"""Combinatorial bi-multiple Eisenstein series and balanced multiple q-zeta
values, built as truncated bimoulds.

Pipeline:

    beta (depth 1 fixed, depth 2 solved from the double shuffle system)
      -> mould bfrak_d(X_1..X_d) = sum beta_*(k) X^{k-1}
      -> bimoulds b, btilde
      -> L^(u) and g* (q-series coefficients)
      -> G = g* . b (mould product)
      -> Bal = G with Y_i -> Y_i - Y_{i-1}

The coefficient of X_1^{k_1-1} Y_1^{m_1} ... X_d^{k_d-1} Y_d^{m_d} in Bal is
zeta_q(k_1, {0}^{m_1}, ..., k_d, {0}^{m_d}).
"""

from __future__ import annotations

import itertools
import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import linalg
from .bimould import (
    TruncBimould, TruncPoly, TruncationError, monomials, mould_product,
    sub_hash_Y_inv, xv, yv,
)
from .qseries import DEFAULT_ORDER, QSeries, bernoulli
from .quasishuffle import SHUFFLE, STUFFLE_Y, qshuffle
from .regmaps import LeadingZeroError, reg_T_inverse
from .words import B, X01, Y, Letter, LinComb, Word, b_blocks

REQUIRED_DEPTH = 2


class MissingBetaError(KeyError):
    """The beta table does not cover a requested index."""


class DepthError(ValueError):
    """The requested depth exceeds the constructed bimoulds."""


# --- beta and gamma --------------------------------------------------------

def beta_depth1(k: int) -> Fraction:
    """beta(k) = -B_k / (2 k!) for even k, 0 for odd k (including k = 1)."""
    if k >= 2 and k % 2 == 0:
        return -bernoulli(k) / (2 * math.factorial(k))
    return Fraction(0)


@lru_cache(maxsize=None)
def gamma(n: int) -> Fraction:
    """Coefficients of exp(sum_{n>=2} (-1)^{n+1}/n * B_n/(2 n!) T^n)."""
    return gamma_coeffs(n)[n]


@lru_cache(maxsize=None)
def gamma_coeffs(n: int) -> tuple:
    # exp of a series a(T) with a_0 = a_1 = 0: g' = a' g, i.e.
    # i g_i = sum_{j=1}^{i} j a_j g_{i-j}
    a = [Fraction(0)] * (n + 1)
    for j in range(2, n + 1):
        a[j] = Fraction((-1) ** (j + 1), j) * bernoulli(j) / (2 * math.factorial(j))
    g = [Fraction(0)] * (n + 1)
    g[0] = Fraction(1)
    for i in range(1, n + 1):
        g[i] = sum(j * a[j] * g[i - j] for j in range(1, i + 1)) / i
    return tuple(g)


@dataclass
class BetaTable:
    """Rational values beta_*(k) and beta_*(k1, k2).

    ``depth1`` maps k -> value; ``depth2`` maps (k1, k2) -> value.
    ``kernel`` records, per weight, a basis of the solution space of the
    homogeneous system (empty when the solution is unique).
    """

    depth1: dict
    depth2: dict
    max_weight: int
    provenance: str = "SOLVED"
    kernel: dict = field(default_factory=dict)

    def get(self, ks: tuple) -> Fraction:
        if len(ks) == 0:
            return Fraction(1)
        try:
            if len(ks) == 1:
                return self.depth1[ks[0]]
            if len(ks) == 2:
                return self.depth2[tuple(ks)]
        except KeyError:
            pass
        raise MissingBetaError(f"no beta value for {tuple(ks)}")

    def __getitem__(self, ks):
        if isinstance(ks, int):
            ks = (ks,)
        return self.get(tuple(ks))

    def fingerprint(self) -> tuple:
        return (tuple(sorted(self.depth1.items())), tuple(sorted(self.depth2.items())))

    def to_json(self) -> dict:
        f = lambda c: str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return {
            "depth1": {str(k): f(v) for k, v in sorted(self.depth1.items())},
            "depth2": {f"{a},{b_}": f(v) for (a, b_), v in sorted(self.depth2.items())},
        }

    @classmethod
    def from_json(cls, data: dict, provenance: str = "USER") -> "BetaTable":
        d1 = {int(k): Fraction(v) for k, v in data.get("depth1", {}).items()}
        d2 = {}
        for k, v in data.get("depth2", {}).items():
            a, b_ = (int(x) for x in k.split(","))
            d2[(a, b_)] = Fraction(v)
        w = max([k for k in d1] + [a + b_ for a, b_ in d2] + [0])
        return cls(d1, d2, w, provenance)

    @classmethod
    def load(cls, path) -> "BetaTable":
        return cls.from_json(json.loads(Path(path).read_text()))

    def with_depth2(self, updates: dict) -> "BetaTable":
        d2 = dict(self.depth2)
        d2.update(updates)
        return BetaTable(dict(self.depth1), d2, self.max_weight, "USER", {})


def _y_word(ks) -> Word:
    return Word(Letter(Y, (k,)) for k in ks)


def _x_word(k: int) -> Word:
    return Word([Letter(X01, (0,))] * (k - 1) + [Letter(X01, (1,))])


def _x_to_y(w: Word) -> Word:
    ks, run = [], 0
    for l in w:
        if l.idx[0] == 0:
            run += 1
        else:
            ks.append(run + 1)
            run = 0
    if run:
        raise ValueError(f"x-word not ending in x1: {w}")
    return _y_word(ks)


class _LinearForm:
    """Affine form sum_c a_c * unknown_c + const, over a fixed column list."""

    def __init__(self, ncols: int):
        self.vec = [Fraction(0)] * ncols
        self.const = Fraction(0)


def _constraint_rows(w: int, d1: dict, d2: dict) -> tuple[list, list, list, list]:
    """Rows of the weight-w depth-2 double shuffle system.

    Returns (columns, rows, rhs, labels).
    """
    cols = [(k1, w - k1) for k1 in range(1, w)]
    col_index = {c: i for i, c in enumerate(cols)}
    n = len(cols)
    gam = gamma_coeffs(w)

    def beta1(k):
        return d1[k] if k in d1 else beta_depth1(k)

    def star_convergent(word: Word, coef: Fraction, form: _LinearForm):
        ks = tuple(l.idx[0] for l in word)
        if len(ks) == 0:
            form.const += coef
        elif len(ks) == 1:
            form.const += coef * beta1(ks[0])
        elif len(ks) == 2:
            if sum(ks) == w:
                form.vec[col_index[ks]] += coef
            else:
                form.const += coef * d2[ks]
        else:
            raise ValueError("depth > 2 in depth-2 constraint system")

    def star(x: LinComb, form: _LinearForm, shuffle_reg: bool = False):
        # stuffle-regularized value (T = 0), or the shuffle-regularized value
        # obtained from the T-polynomial via T^n -> n! gamma_n
        poly = reg_T_inverse(x, STUFFLE_Y)
        for deg, p in poly.items():
            if deg and not shuffle_reg:
                continue
            scale = math.factorial(deg) * gam[deg] if shuffle_reg else Fraction(1)
            if not scale:
                continue
            for word, c in p.terms.items():
                star_convergent(word, c * scale, form)

    rows, rhs, labels = [], [], []
    # regularization: unknowns with leading 1 equal their regularized value
    for (k1, k2) in cols:
        if k1 == 1:
            f = _LinearForm(n)
            star(LinComb({_y_word((k1, k2)): 1}), f)
            f.vec[col_index[(k1, k2)]] -= 1
            rows.append(f.vec)
            rhs.append(-f.const)
            labels.append(f"reg y1 y{k2}")
    for k1 in range(1, w // 2 + 1):
        k2 = w - k1
        # stuffle: beta(k1) beta(k2) = zeta*(y_k1 * y_k2)
        f = _LinearForm(n)
        star(qshuffle(STUFFLE_Y, _y_word((k1,)), _y_word((k2,))), f)
        rows.append(f.vec)
        rhs.append(beta1(k1) * beta1(k2) - f.const)
        labels.append(f"stuffle {k1},{k2}")
        # shuffle: beta(k1) beta(k2) = zeta^sh(x-word shuffle)
        f = _LinearForm(n)
        prod = qshuffle(SHUFFLE, _x_word(k1), _x_word(k2))
        ylc = LinComb((_x_to_y(word), c) for word, c in prod.terms.items())
        star(ylc, f, shuffle_reg=True)
        rows.append(f.vec)
        rhs.append(beta1(k1) * beta1(k2) - f.const)
        labels.append(f"shuffle {k1},{k2}")
    return cols, rows, rhs, labels


def solve_beta_depth2(max_weight: int = 12) -> BetaTable:
    """Solve the depth-2 double shuffle system weight by weight.

    Free parameters are set to zero; columns are ordered by (k1, k2)
    lexicographically and pivots are chosen leftmost-first.
    """
    if max_weight > 16:
        raise ValueError("max_weight above 16 is not supported")
    d1 = {k: beta_depth1(k) for k in range(1, max_weight + 1)}
    d2: dict = {}
    kernel: dict = {}
    for w in range(2, max_weight + 1):
        cols, rows, rhs, labels = _constraint_rows(w, d1, d2)
        try:
            x, ker = linalg.solve_affine(rows, rhs, len(cols))
        except linalg.InconsistentSystemError as e:
            raise linalg.InconsistentSystemError(
                f"weight {w}: inconsistent constraint {labels[e.row]}", e.row) from None
        for c, v in zip(cols, x):
            d2[c] = v
        if ker:
            kernel[w] = [dict(zip(cols, v)) for v in ker]
    return BetaTable(d1, d2, max_weight, "SOLVED", kernel)


def beta_residuals(beta: BetaTable, max_weight: int | None = None) -> dict:
    """Residuals of every constraint (zero for a valid table)."""
    W = max_weight or beta.max_weight
    out = {}
    d2: dict = {}
    for w in range(2, W + 1):
        cols, rows, rhs, labels = _constraint_rows(w, beta.depth1, d2)
        vals = [beta.depth2[c] for c in cols]
        for r, b_, lab in zip(rows, rhs, labels):
            res = sum(a * v for a, v in zip(r, vals)) - b_
            out[(w, lab)] = res
        for c in cols:
            d2[c] = beta.depth2[c]
    return out


_default_beta_lock = threading.Lock()
_default_beta: BetaTable | None = None


def default_beta(max_weight: int = 12) -> BetaTable:
    global _default_beta
    with _default_beta_lock:
        if _default_beta is None or _default_beta.max_weight < max_weight:
            _default_beta = solve_beta_depth2(max(max_weight, 12))
        return _default_beta


# --- rational bimoulds -----------------------------------------------------

def mould_poly(beta: BetaTable, r: int, degree: int) -> TruncPoly:
    """bfrak_r(Z_1..Z_r) = sum beta_*(k) prod Z_i^{k_i - 1} up to total degree."""
    if r == 0:
        return TruncPoly.constant(Fraction(1), 0, degree)
    terms = {}
    for e in monomials(r, degree):
        ks = tuple(a + 1 for a in e)
        v = beta.get(ks)
        if v:
            terms[e] = v
    return TruncPoly(r, degree, terms)


def build_b_bimould(beta: BetaTable, depth: int, weight: int) -> TruncBimould:
    """b_d = sum_{0<=i<=j<=d} gamma_i bfrak_{j-i}(Y_1+..+Y_{j-i}, .., Y_1)
    bfrak_{d-j}(X_{j+1}, .., X_d)."""
    gam = gamma_coeffs(max(depth, 1))
    parts = {0: TruncPoly.constant(Fraction(1), 0, weight)}
    for d in range(1, depth + 1):
        deg = weight - d
        nv = 2 * d
        acc = TruncPoly(nv, deg)
        for j in range(0, d + 1):
            second = mould_poly(beta, d - j, deg).substitute(
                [{xv(j + s): Fraction(1)} for s in range(1, d - j + 1)], nv)
            for i in range(0, j + 1):
                if not gam[i]:
                    continue
                r = j - i
                first = mould_poly(beta, r, deg).substitute(
                    [{yv(t): Fraction(1) for t in range(1, r + 2 - s)} for s in range(1, r + 1)], nv)
                acc = acc + first.mul(second, degree=deg).scale(gam[i])
        parts[d] = acc
    return TruncBimould(parts, weight, depth)


def build_btilde(b: TruncBimould) -> TruncBimould:
    """btilde_d = sum_i (-1)^i/(2^i i!) b_{d-i}(X_{i+1}..X_d; -Y_1..-Y_{d-i})."""
    parts = {0: b[0]}
    for d in range(1, b.depth_bound + 1):
        nv = 2 * d
        deg = b.weight - d
        acc = TruncPoly(nv, deg)
        for i in range(0, d + 1):
            r = d - i
            forms = []
            for s in range(1, r + 1):
                forms.append({xv(i + s): Fraction(1)})
                forms.append({yv(s): Fraction(-1)})
            p = b[r].truncate(deg) if b[r].degree > deg else b[r]
            acc = acc + p.substitute(forms, nv).scale(Fraction((-1) ** i, 2 ** i * math.factorial(i)))
        parts[d] = acc
    return TruncBimould(parts, b.weight, b.depth_bound)


def _L_prefactor(b: TruncBimould, bt: TruncBimould, c: int, t: int, degree: int) -> TruncPoly:
    """b_{t-1}(X_1-X_t..X_{t-1}-X_t; Y_1..Y_{t-1}) *
    btilde_{c-t}(X_c-X_t..X_{t+1}-X_t; Y_c..Y_{t+1}) in 2c variables."""
    nv = 2 * c
    forms = []
    for s in range(1, t):
        forms.append({xv(s): Fraction(1), xv(t): Fraction(-1)})
        forms.append({yv(s): Fraction(1)})
    left = b[t - 1].truncate(degree).substitute(forms, nv)
    forms = []
    for s in range(1, c - t + 1):
        forms.append({xv(c + 1 - s): Fraction(1), xv(t): Fraction(-1)})
        forms.append({yv(c + 1 - s): Fraction(1)})
    right = bt[c - t].truncate(degree).substitute(forms, nv)
    return left.mul(right, degree=degree)


# --- q-series parts ---------------------------------------------------------

def bracket_sums(j: int, degree: int, order: int) -> dict:
    """Integer coefficient arrays of

        sum_{u_1 > .. > u_j > 0} sum_{n_i > 0} prod n_i^{a_i} u_i^{b_i} q^{sum n_i u_i}

    keyed by (a_1, b_1, .., a_j, b_j) with total degree <= ``degree``.
    """
    N = order
    mons1 = [(a, b_) for a in range(degree + 1) for b_ in range(degree + 1 - a)]
    one = np.zeros(N + 1, dtype=object)
    one[:] = 0
    one[0] = 1
    C = [dict() for _ in range(j + 1)]
    C[0] = {(): one}
    for u in range(1, N + 1):
        nmax = N // u
        if nmax == 0:
            break
        for l in range(j, 0, -1):
            prev = C[l - 1]
            if not prev:
                continue
            for e, arr in list(prev.items()):
                de = sum(e)
                if de > degree:
                    continue
                # S_a = sum_n n^a shift_{nu}(arr)
                for a in range(degree - de + 1):
                    S = np.zeros(N + 1, dtype=object)
                    S[:] = 0
                    for n in range(1, nmax + 1):
                        s = n * u
                        S[s:] += (n ** a) * arr[: N + 1 - s]
                    if not S.any():
                        continue
                    ub = 1
                    for b_ in range(degree - de - a + 1):
                        key = (a, b_) + e
                        tgt = C[l].get(key)
                        if tgt is None:
                            C[l][key] = S * ub
                        else:
                            tgt += S * ub
                        ub *= u
    return C[j]


def bracket_poly(j: int, degree: int, order: int) -> TruncPoly:
    """Lambda_j(Z_1, W_1, .., Z_j, W_j) = sum_{u_1>..>u_j} prod L_{u_i}(Z_i; W_i)
    with QSeries coefficients."""
    raw = bracket_sums(j, degree, order)
    terms = {}
    for e, arr in raw.items():
        den = math.prod(math.factorial(x) for x in e)
        cs = [Fraction(int(v), den) for v in arr]
        if any(cs):
            terms[e] = QSeries._raw(cs)
    return TruncPoly(2 * j, degree, terms)


def build_L(u: int, b: TruncBimould, bt: TruncBimould, order: int) -> TruncBimould:
    """The bimould L^(u) for a single u (used for inspection and tests)."""
    N = order
    weight = b.weight
    parts = {0: TruncPoly.constant(QSeries([1], N), 0, weight)}
    for d in range(1, b.depth_bound + 1):
        deg = weight - d
        nv = 2 * d
        Lu = {}
        for a in range(deg + 1):
            for b_ in range(deg + 1 - a):
                cs = [Fraction(0)] * (N + 1)
                for n in range(1, N // u + 1):
                    cs[n * u] += Fraction(n ** a * u ** b_, math.factorial(a) * math.factorial(b_))
                Lu[(a, b_)] = QSeries._raw(cs)
        Lpoly = TruncPoly(2, deg, Lu)
        acc = TruncPoly(nv, deg)
        for t in range(1, d + 1):
            pre = _L_prefactor(b, bt, d, t, deg)
            sub = Lpoly.substitute([{xv(t): Fraction(1)}, {yv(s): Fraction(1) for s in range(1, d + 1)}], nv)
            acc = acc + sub.mul(pre, degree=deg)
        parts[d] = acc
    return TruncBimould(parts, weight, b.depth_bound)


def _compositions_of(d: int):
    for cuts in itertools.product((0, 1), repeat=d - 1):
        sizes, cur = [], 1
        for c in cuts:
            if c:
                sizes.append(cur)
                cur = 1
            else:
                cur += 1
        sizes.append(cur)
        yield tuple(sizes)


def build_gstar(b: TruncBimould, bt: TruncBimould, order: int) -> TruncBimould:
    """g*_d = sum over compositions (c_1..c_j) of d and u_1 > .. > u_j of
    prod_i L^(u_i)_{c_i} on consecutive variable blocks."""
    weight = b.weight
    depth = b.depth_bound
    N = order
    brackets = {j: bracket_poly(j, weight - j, N) for j in range(1, depth + 1)}
    parts = {0: TruncPoly.constant(QSeries([1], N), 0, weight)}
    for d in range(1, depth + 1):
        deg = weight - d
        nv = 2 * d
        acc = TruncPoly(nv, deg)
        for comp in _compositions_of(d):
            j = len(comp)
            starts = [sum(comp[:i]) for i in range(j)]
            lam = brackets[j].truncate(deg)
            for ts in itertools.product(*[range(1, c + 1) for c in comp]):
                pre = TruncPoly.constant(Fraction(1), nv, deg)
                forms = []
                for c, st, t in zip(comp, starts, ts):
                    p = _L_prefactor(b, bt, c, t, deg)
                    pre = pre.mul(p.embed(range(2 * st, 2 * st + 2 * c), nv), degree=deg)
                    forms.append({xv(st + t): Fraction(1)})
                    forms.append({yv(st + s): Fraction(1) for s in range(1, c + 1)})
                if not pre.terms:
                    continue
                acc = acc + lam.substitute(forms, nv).mul(pre, degree=deg)
        parts[d] = acc
    return TruncBimould(parts, weight, depth)


def _as_qseries(M: TruncBimould, order: int) -> TruncBimould:
    def conv(c):
        return c if isinstance(c, QSeries) else QSeries([c], order)
    return M.map_coefficients(conv)


@dataclass
class EisensteinData:
    """All bimoulds of the construction for fixed (beta, depth, weight, order)."""

    beta: BetaTable
    depth: int
    weight: int
    order: int
    b: TruncBimould
    btilde: TruncBimould
    gstar: TruncBimould
    G: TruncBimould
    Bal: TruncBimould


def build_all(depth: int = 2, weight: int = 8, order: int = DEFAULT_ORDER,
              beta: BetaTable | None = None) -> EisensteinData:
    if depth > REQUIRED_DEPTH:
        raise DepthError(f"depth {depth} needs beta values beyond depth {REQUIRED_DEPTH}")
    beta = beta or default_beta(weight)
    if beta.max_weight < weight:
        raise MissingBetaError(f"beta table covers weight <= {beta.max_weight}, need {weight}")
    b = build_b_bimould(beta, depth, weight)
    bt = build_btilde(b)
    gs = build_gstar(b, bt, order)
    G = _as_qseries(mould_product(gs, b), order)
    Bal = sub_hash_Y_inv(G)
    return EisensteinData(beta, depth, weight, order, b, bt, gs, G, Bal)


def build_G(depth: int = 2, weight: int = 8, order: int = DEFAULT_ORDER,
            beta: BetaTable | None = None) -> TruncBimould:
    return _cached(depth, weight, order, beta).G


def build_Bal(depth: int = 2, weight: int = 8, order: int = DEFAULT_ORDER,
              beta: BetaTable | None = None) -> TruncBimould:
    return _cached(depth, weight, order, beta).Bal


_cache_lock = threading.Lock()
_cache: dict = {}


def _cached(depth: int, weight: int, order: int, beta: BetaTable | None) -> EisensteinData:
    beta = beta or default_beta(weight)
    fp = beta.fingerprint()
    with _cache_lock:
        # any cached build with at least the requested bounds will do
        for (fp2, d2, w2, n2), data in _cache.items():
            if fp2 == fp and d2 >= depth and w2 >= weight and n2 >= order:
                return data
    data = build_all(depth, weight, order, beta)
    with _cache_lock:
        _cache[(fp, depth, weight, order)] = data
    return data


class BalancedZetaQ:
    """Evaluator for balanced multiple q-zeta values with fixed bounds.

    The bimoulds are built lazily and grown on demand when a word of larger
    weight is requested.
    """

    def __init__(self, order: int = DEFAULT_ORDER, beta: BetaTable | None = None,
                 depth: int = REQUIRED_DEPTH, weight: int = 0):
        self.order = order
        self.beta = beta
        self.depth = depth
        self.weight = weight
        self._data: EisensteinData | None = None
        self._memo: dict = {}

    def _ensure(self, weight: int) -> EisensteinData:
        if self._data is None or self._data.weight < weight:
            self.weight = max(self.weight, weight)
            self._data = _cached(self.depth, self.weight, self.order, self.beta)
        return self._data

    def __call__(self, x, order: int | None = None) -> QSeries:
        N = self.order if order is None else order
        if N > self.order:
            raise TruncationError(f"order {N} exceeds evaluator order {self.order}")
        if isinstance(x, LinComb):
            out = QSeries.zero(N)
            for w, c in x.terms.items():
                out = out + self(w, N) * c
            return out
        if isinstance(x, (tuple, list)) and x and isinstance(x[0], int):
            x = Word(Letter(B, (i,)) for i in x)
        w = Word(x)
        r = self._memo.get(w)
        if r is None:
            r = self._word(w)
            self._memo[w] = r
        return r.truncate(N)

    def _word(self, w: Word) -> QSeries:
        if not w:
            return QSeries([1], self.order)
        if w.alphabet != B:
            raise ValueError("balanced q-zeta values take B-words")
        if w[0].idx[0] == 0:
            raise LeadingZeroError(f"word starts with b0: {w}")
        blocks = b_blocks(w)
        d = len(blocks)
        if d > self.depth:
            raise DepthError(f"depth {d} exceeds available depth {self.depth}")
        data = self._ensure(w.weight)
        e = []
        for k, m in blocks:
            e += [k - 1, m]
        c = data.Bal[d].coefficient(tuple(e), None)
        if c is None:
            return QSeries.zero(self.order)
        return c

    def G(self, ks: tuple, ms: tuple) -> QSeries:
        """Combinatorial bi-multiple Eisenstein series G(k; m) (normalized)."""
        d = len(ks)
        data = self._ensure(sum(ks) + sum(ms))
        e = []
        for k, m in zip(ks, ms):
            e += [k - 1, m]
        c = data.G[d].coefficient(tuple(e), None)
        scale = math.prod(math.factorial(m) for m in ms)
        return QSeries.zero(self.order) if c is None else c * scale


_default_evaluators: dict = {}


def balanced_zeta_q(s, order: int = DEFAULT_ORDER, beta: BetaTable | None = None) -> QSeries:
    """zeta_q(s_1, .., s_l) for an index tuple, a B-word or a combination of
    B-words."""
    key = (beta.fingerprint() if beta else None, order)
    ev = _default_evaluators.get(key)
    if ev is None:
        ev = _default_evaluators[key] = BalancedZetaQ(order, beta)
    return ev(s)
