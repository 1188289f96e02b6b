"""Verification of identities between balanced multiple q-zeta values,
relation search in fixed weight, and the q -> 1 limit.

All q-series comparisons are exact (rational coefficients up to q^N).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .bimould import check_b_symmetril, check_swap_inv, check_symmetril, check_tau_inv
from .eisenstein import (
    REQUIRED_DEPTH, BalancedZetaQ, BetaTable, DepthError, _cached,
)
from .qseries import QSeries, delta_series, depth1_balanced_closed_form, eval_float, qderiv
from .quasishuffle import BALANCED_B, qshuffle, qshuffle_py
from .regmaps import (
    delta_dec0, embed_i, phi_sharp, reg, swap_Ybi, tau_B, tau_PY,
)
from .words import (
    X01, Y, Letter, LinComb, Word, as_lincomb, b_words, delta_dec,
    format_lincomb, tensor_map, ybi_words, z,
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def line(self) -> str:
        s = f"{'PASS' if self.ok else 'FAIL'} {self.name}"
        return s + (f": {self.detail}" if self.detail else "")


def _evaluator(order: int, beta: BetaTable | None, ev: BalancedZetaQ | None) -> BalancedZetaQ:
    if ev is not None and ev.order >= order:
        return ev
    return BalancedZetaQ(order, beta)


def _first_difference(a: QSeries, b: QSeries) -> int | None:
    n = min(a.order, b.order)
    for i in range(n + 1):
        if a[i] != b[i]:
            return i
    return None


def _compare(name: str, lhs: QSeries, rhs: QSeries) -> CheckResult:
    i = _first_difference(lhs, rhs)
    if i is None:
        return CheckResult(name, True)
    return CheckResult(name, False, f"first difference at q^{i}: {lhs[i]} vs {rhs[i]}")


def _max_depth(x: LinComb) -> int:
    return max((w.depth for w in x.terms), default=0)


# --- q-series identities ----------------------------------------------------

def verify_product(u, v, order: int = 40, beta: BetaTable | None = None,
                   evaluator: BalancedZetaQ | None = None) -> CheckResult:
    """zeta_q(u) zeta_q(v) == zeta_q(u *_b v) up to q^order."""
    u, v = as_lincomb(u), as_lincomb(v)
    prod = qshuffle(BALANCED_B, u, v)
    if _max_depth(prod) > REQUIRED_DEPTH:
        raise DepthError(f"product has depth {_max_depth(prod)}")
    ev = _evaluator(order, beta, evaluator)
    lhs = ev(u, order) * ev(v, order)
    rhs = ev(prod, order)
    return _compare(f"product {format_lincomb(u)} | {format_lincomb(v)}", lhs, rhs)


def verify_tau(w, order: int = 40, beta: BetaTable | None = None,
               evaluator: BalancedZetaQ | None = None) -> CheckResult:
    """zeta_q(w) == zeta_q(tau(w)) up to q^order."""
    w = as_lincomb(w)
    t = tau_B(w)
    if max(_max_depth(w), _max_depth(t)) > REQUIRED_DEPTH:
        raise DepthError("tau image exceeds the available depth")
    ev = _evaluator(order, beta, evaluator)
    return _compare(f"tau {format_lincomb(w)}", ev(w, order), ev(t, order))


def derivation_image(w) -> LinComb:
    """sum_{i<=j} s_i zeta_q(s_1, .., s_i + 1, .., s_j, 0, s_{j+1}, .., s_l)."""
    if isinstance(w, LinComb):
        return w.map_linear(derivation_image)
    s = [l.idx[0] for l in Word(w)]
    out: dict = {}
    for i in range(len(s)):
        if not s[i]:
            continue
        for j in range(i, len(s)):
            t = list(s)
            t[i] += 1
            t = t[: j + 1] + [0] + t[j + 1:]
            word = z(*t)
            out[word] = out.get(word, 0) + s[i]
    return LinComb(out)


def verify_derivation(w, order: int = 40, beta: BetaTable | None = None,
                      evaluator: BalancedZetaQ | None = None) -> CheckResult:
    """q d/dq zeta_q(w) == zeta_q(derivation_image(w)) up to q^order."""
    w = as_lincomb(w)
    ev = _evaluator(order, beta, evaluator)
    lhs = qderiv(ev(w, order))
    rhs = ev(derivation_image(w), order)
    return _compare(f"derivation {format_lincomb(w)}", lhs, rhs)


# --- word-level algebra -----------------------------------------------------

def verify_word_algebra(max_weight: int = 5) -> list[CheckResult]:
    """Exhaustive word-level identities up to the given weight:
    reg is a morphism for *_b, phi_sharp respects the coproducts,
    phi_sharp intertwines swap and tau, and the embedding i into {p, y}-words
    satisfies i(u *_b v) = tau(tau i(u) sh tau i(v))."""
    results = []
    allb = [w for wt in range(1, max_weight + 1) for w in b_words(wt)]
    b0free = [w for w in allb if w[0].idx[0] != 0]

    bad = None
    n = 0
    for u in allb:
        for v in allb:
            if u.weight + v.weight > max_weight:
                continue
            n += 1
            if reg(qshuffle(BALANCED_B, u, v)) != qshuffle(BALANCED_B, reg(u), reg(v)):
                bad = (u, v)
                break
        if bad:
            break
    results.append(CheckResult("reg is a *_b morphism", bad is None,
                               f"{n} pairs" if bad is None else f"fails at {bad[0]} | {bad[1]}"))

    ys = [w for wt in range(1, max_weight + 1) for w in ybi_words(wt)]
    bad = next((v for v in ys
                if tensor_map(delta_dec(v), phi_sharp) != delta_dec0(phi_sharp(v))), None)
    results.append(CheckResult("phi_sharp respects the coproducts", bad is None,
                               f"{len(ys)} words" if bad is None else f"fails at {bad}"))

    bad = next((v for v in ys if phi_sharp(swap_Ybi(v)) != tau_B(phi_sharp(v))), None)
    results.append(CheckResult("phi_sharp o swap = tau o phi_sharp", bad is None,
                               f"{len(ys)} words" if bad is None else f"fails at {bad}"))

    bad = None
    n = 0
    for u in b0free:
        for v in b0free:
            if u.weight + v.weight > max_weight:
                continue
            n += 1
            lhs = embed_i(qshuffle(BALANCED_B, u, v))
            rhs = tau_PY(qshuffle_py(tau_PY(embed_i(u)), tau_PY(embed_i(v))))
            if lhs != rhs:
                bad = (u, v)
                break
        if bad:
            break
    results.append(CheckResult("embedding into {p, y}-words", bad is None,
                               f"{n} pairs" if bad is None else f"fails at {bad[0]} | {bad[1]}"))
    return results


# --- formal limit ------------------------------------------------------------

@dataclass(frozen=True)
class LimitSymbol:
    """Formal combination of products zeta^sh(x-word) zeta^*(y-word).

    ``terms`` maps (x-word, y-word) to a rational coefficient.
    """

    terms: tuple

    def pairs(self) -> list:
        return [p for p, _ in self.terms]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (xw, yw), c in self.terms:
            coef = "" if c == 1 else f"{c}*"
            parts.append(f"{coef}zsh({xw})*zst({yw})")
        return " + ".join(parts)

    def to_json(self) -> list:
        return [{"shuffle": str(xw), "stuffle": str(yw), "coef": str(c)}
                for (xw, yw), c in self.terms]


def _limit_word(w: Word) -> dict:
    out = {}
    for n in range(len(w) + 1):
        u, v = w[:n], w[n:]
        if any(l.idx[0] > 1 for l in u) or any(l.idx[0] == 0 for l in v):
            continue
        xw = Word(Letter(X01, (l.idx[0],)) for l in reversed(u))
        yw = Word(Letter(Y, (l.idx[0],)) for l in v)
        out[(xw, yw)] = out.get((xw, yw), 0) + 1
    return out


def formal_limit(x) -> LimitSymbol:
    """The regularized q -> 1 limit as a combination of products of
    regularized zeta values, from the factorizations w = uv with u over
    {b0, b1} and v over {b_i, i >= 1}."""
    acc: dict = {}
    for w, c in as_lincomb(x).terms.items():
        for key, m in _limit_word(w).items():
            acc[key] = acc.get(key, 0) + c * m
    items = sorted(((k, Fraction(v)) for k, v in acc.items() if v),
                   key=lambda t: (len(t[0][0]), tuple(t[0][0]), tuple(t[0][1])))
    return LimitSymbol(tuple(items))


def mzv_float(ks: tuple, terms: int = 100000) -> float:
    """Rough float value of a convergent zeta(k_1, .., k_d), d <= 2, with a
    first-order tail correction.  Used only for advisory limit checks."""
    if len(ks) == 1:
        k = ks[0]
        s = sum(n ** -k for n in range(1, terms + 1))
        return s + terms ** (1 - k) / (k - 1)
    if len(ks) == 2:
        k1, k2 = ks
        s, h = 0.0, 0.0
        for n in range(1, terms + 1):
            s += h * n ** -k1
            h += n ** -k2
        return s + h * terms ** (1 - k1) / (k1 - 1)
    raise ValueError("only depth <= 2")


@dataclass
class LimitReport:
    word: Word
    grid: list
    values: list
    extrapolated: float
    target: float | None
    rel_error: float | None
    ok: bool | None

    def line(self) -> str:
        tag = "ADVISORY " + ("PASS" if self.ok else "FAIL" if self.ok is False else "n/a")
        t = "" if self.target is None else f", target {self.target:.6f}, rel. error {self.rel_error:.3%}"
        return f"{tag} limit {self.word}: extrapolated {self.extrapolated:.6f}{t}"


def _neville_at_zero(hs: list, fs: list) -> float:
    p = list(fs)
    n = len(hs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (hs[i + k] * p[i] - hs[i] * p[i + 1]) / (hs[i + k] - hs[i])
    return p[0]


def numeric_limit_check(w, q_grid=(0.80, 0.84, 0.88, 0.92), order: int = 600,
                        target: float | None = None, tolerance: float = 0.05,
                        beta: BetaTable | None = None) -> LimitReport:
    """Evaluate (1 - q)^wt zeta_q(w) on a grid and extrapolate to q = 1
    (polynomial extrapolation in h = 1 - q).  Advisory only."""
    w = Word(w) if not isinstance(w, Word) else w
    if w.depth == 1 and all(l.idx[0] == 0 for l in w[1:]):
        f = depth1_balanced_closed_form(w[0].idx[0], len(w) - 1, order)
    else:
        f = BalancedZetaQ(order, beta)(w)
    wt = w.weight
    vals = [(1 - q0) ** wt * eval_float(f, q0) for q0 in q_grid]
    hs = [1 - q0 for q0 in q_grid]
    ext = _neville_at_zero(hs, vals)
    ks = tuple(l.idx[0] for l in w)
    if target is None and all(ks) and ks[0] >= 2 and len(ks) <= 2:
        target = mzv_float(ks)
    if target is None:
        return LimitReport(w, list(q_grid), vals, ext, None, None, None)
    err = abs(ext - target) / abs(target)
    return LimitReport(w, list(q_grid), vals, ext, target, err, err <= tolerance)


# --- relations ----------------------------------------------------------------

@dataclass
class Relation:
    weight: int
    basis: list
    vector: list
    checked_order: int

    def lincomb(self) -> LinComb:
        return LinComb(zip(self.basis, self.vector))

    def __str__(self) -> str:
        return format_lincomb(self.lincomb())

    def to_json(self) -> dict:
        f = lambda c: str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return {
            "weight": self.weight,
            "basis": [str(w) for w in self.basis],
            "vector": [f(c) for c in self.vector],
            "checked_order": self.checked_order,
        }


def relation_basis(weight: int, max_depth: int = REQUIRED_DEPTH) -> list[Word]:
    """B-words of the given weight not starting with b0, depth <= max_depth,
    in graded-lexicographic order of their index tuples."""
    words = [w for w in b_words(weight, max_depth, convergent=True) if w]
    return sorted(words, key=lambda w: (len(w), tuple(l.idx[0] for l in w)))


def find_relations(weight: int, max_depth: int = REQUIRED_DEPTH, order: int = 40,
                   beta: BetaTable | None = None, recheck: bool = True) -> list[Relation]:
    """All linear relations among zeta_q(w), w in the basis of the given
    weight, visible up to q^order.  Each relation is re-verified at twice
    the order when ``recheck`` is set; vectors failing the recheck are
    dropped."""
    if max_depth > REQUIRED_DEPTH:
        raise DepthError(f"depth {max_depth} exceeds the available depth {REQUIRED_DEPTH}")
    basis = relation_basis(weight, max_depth)
    if not basis:
        return []
    big = 2 * order if recheck else order
    ev = BalancedZetaQ(big, beta)
    cols = [ev(w, big) for w in basis]
    rows = [[c[i] for c in cols] for i in range(order + 1)]
    kernel = linalg.nullspace(rows, len(basis))
    # present as a reduced basis with leading entry 1
    if kernel:
        R, _ = linalg.rref([[v[i] for i in range(len(basis))] for v in kernel], len(basis))
        kernel = R
    out = []
    for v in kernel:
        lead = next(c for c in v if c)
        v = [c / lead for c in v]
        checked = order
        if recheck:
            total = QSeries.zero(big)
            for c, col in zip(v, cols):
                if c:
                    total = total + col * c
            if not total.is_zero():
                continue
            checked = big
        out.append(Relation(weight, basis, v, checked))
    return out


# --- the weight 12 cusp form relation -------------------------------------

DELTA_RELATION = (
    ((4, 4, 4), Fraction(240)),
    ((9, 3), Fraction(-63)),
    ((8, 4), Fraction(183)),
    ((7, 5), Fraction(-675, 2)),
    ((6, 6), Fraction(89, 2)),
    ((5, 7), Fraction(-378)),
    ((4, 8), Fraction(183)),
)


def delta_relation_residual(order: int = 12, beta: BetaTable | None = None) -> QSeries:
    """Delta(q)/43200 minus the depth <= 2 part of its expression through
    weight 12 balanced q-zeta values.  With the full depth-3 term this would
    vanish; here it equals the missing depth-3 contribution."""
    ev = BalancedZetaQ(order, beta)
    acc = delta_series(order) / 43200
    for s, c in DELTA_RELATION:
        if len(s) <= REQUIRED_DEPTH:
            acc = acc - ev(s) * c
    return acc


# --- suites -----------------------------------------------------------------

SUITES = ("words", "tau", "product", "derivation", "moulds", "relations", "limit")


def _b0free_words(wt: int, max_depth: int) -> list[Word]:
    return [w for w in b_words(wt, max_depth, convergent=True) if w]


def _random_combination(rng: random.Random, words: list, terms: int = 3) -> LinComb:
    picks = rng.sample(words, min(terms, len(words)))
    return LinComb((w, Fraction(rng.randint(-9, 9), rng.randint(1, 5))) for w in picks)


def run_suite(name: str, max_weight: int = 6, order: int = 40,
              beta: BetaTable | None = None, seed: int = 0) -> list[CheckResult]:
    """Run a named verification suite; returns one result per identity class
    (failing identities are reported individually)."""
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, max_weight, order, beta, seed)]
    if name == "random":
        # random rational combinations, reproducible from the seed
        rng = random.Random(seed)
        ev = BalancedZetaQ(order, beta)
        half = max(1, (max_weight + 2) // 2)
        d1 = [w for wt in range(1, half + 1) for w in _b0free_words(wt, 1)]
        d2 = [w for wt in range(1, max_weight + 1) for w in _b0free_words(wt, REQUIRED_DEPTH)
              if tau_B(w).depth <= REQUIRED_DEPTH]
        out = []
        for _ in range(5):
            out.append(verify_product(_random_combination(rng, d1), _random_combination(rng, d1),
                                      order, evaluator=ev))
            w = _random_combination(rng, d2)
            out.append(verify_tau(w, order, evaluator=ev))
            out.append(verify_derivation(w, order, evaluator=ev))
        fails = [r for r in out if not r]
        return fails or [CheckResult(f"random combinations (seed {seed})", True, f"{len(out)} identities")]
    if name == "words":
        return verify_word_algebra(min(max_weight, 5))
    if name == "tau":
        ev = BalancedZetaQ(order, beta)
        fails, n = [], 0
        for wt in range(1, max_weight + 1):
            for w in _b0free_words(wt, REQUIRED_DEPTH):
                if tau_B(w).depth > REQUIRED_DEPTH:
                    continue
                n += 1
                r = verify_tau(w, order, evaluator=ev)
                if not r:
                    fails.append(r)
        return fails or [CheckResult(f"tau invariance (weight <= {max_weight})", True, f"{n} words")]
    if name == "product":
        wmax = max_weight + 2
        ev = BalancedZetaQ(order, beta)
        words = [w for wt in range(1, wmax) for w in _b0free_words(wt, 1)]
        fails, n = [], 0
        for u, v in itertools.combinations_with_replacement(words, 2):
            if u.weight + v.weight > wmax:
                continue
            n += 1
            r = verify_product(u, v, order, evaluator=ev)
            if not r:
                fails.append(r)
        return fails or [CheckResult(f"product formula (weight <= {wmax})", True, f"{n} pairs")]
    if name == "derivation":
        ev = BalancedZetaQ(order, beta)
        fails, n = [], 0
        for wt in range(1, max_weight + 1):
            for w in _b0free_words(wt, REQUIRED_DEPTH):
                n += 1
                r = verify_derivation(w, order, evaluator=ev)
                if not r:
                    fails.append(r)
        return fails or [CheckResult(f"derivation formula (weight <= {max_weight})", True, f"{n} words")]
    if name == "moulds":
        data = _cached(REQUIRED_DEPTH, max_weight, order, beta)
        G, Bal = data.G, data.Bal
        reps = [("G", check_symmetril(G, REQUIRED_DEPTH)), ("G", check_swap_inv(G, REQUIRED_DEPTH)),
                ("Bal", check_b_symmetril(Bal, REQUIRED_DEPTH)), ("Bal", check_tau_inv(Bal, REQUIRED_DEPTH))]
        return [CheckResult(f"{m} {r.predicate.value}", r.verdict, r.summary()) for m, r in reps]
    if name == "relations":
        rels = find_relations(2, REQUIRED_DEPTH, min(order, 20), beta)
        ok = len(rels) == 1 and rels[0].lincomb() == LinComb({z(2): 1, z(1, 0): -1})
        return [CheckResult("weight 2 relations", ok, "; ".join(str(r) for r in rels))]
    if name == "limit":
        reps = [numeric_limit_check(w) for w in (z(2), z(3))]
        # advisory: never fails the suite
        return [CheckResult(f"limit {r.word} (advisory)", True, r.line()) for r in reps]
    raise ValueError(f"unknown suite: {name}")
