import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qmzv.bimould import (
    DividedDifferenceError, TruncBimould, TruncPoly, TruncationError, balanced_terms,
    check_b_symmetril, check_swap_inv, check_symmetril, check_tau_inv, monomials,
    mould_product, random_bimould, stuffle_terms, sub_hash_Y, sub_hash_Y_inv, swap_bimould,
    tau_bimould, unit_bimould, xv, yv,
)
from qmzv.quasishuffle import qshuffle
from qmzv.regmaps import phi_sharp, swap_Ybi, tau_B
from qmzv.words import EMPTY, YBI, Letter, LinComb, Word, from_b_blocks


def rho_B(W, dmax):
    """Generating bimould sum b_{k1} b0^{m1}.. X^{k-1} Y^m with word coefficients."""
    parts = {0: TruncPoly.constant(LinComb({EMPTY: 1}), 0, W)}
    for d in range(1, dmax + 1):
        t = {}
        for e in monomials(2 * d, W - d):
            blocks = [(e[2 * i] + 1, e[2 * i + 1]) for i in range(d)]
            t[e] = LinComb({from_b_blocks(blocks): 1})
        parts[d] = TruncPoly(2 * d, W - d, t)
    return TruncBimould(parts, W, dmax)


def rho_Y(W, dmax):
    parts = {0: TruncPoly.constant(LinComb({EMPTY: 1}), 0, W)}
    for d in range(1, dmax + 1):
        t = {}
        for e in monomials(2 * d, W - d):
            w = Word(Letter(YBI, (e[2 * i] + 1, e[2 * i + 1])) for i in range(d))
            scale = Fraction(1, math.prod(math.factorial(e[2 * i + 1]) for i in range(d)))
            t[e] = LinComb({w: scale})
        parts[d] = TruncPoly(2 * d, W - d, t)
    return TruncBimould(parts, W, dmax)


@pytest.fixture(scope="module")
def word_moulds():
    return rho_B(6, 3), rho_Y(6, 3)


def test_word_bimoulds_symmetries(word_moulds):
    MB, MY = word_moulds
    assert check_b_symmetril(MB, coeff_mul=lambda a, b: qshuffle("balanced", a, b))
    assert check_symmetril(MY, coeff_mul=lambda a, b: qshuffle("stuffle-bi", a, b))
    # the balanced generating bimould is not symmetril
    assert not check_symmetril(MB, coeff_mul=lambda a, b: qshuffle("balanced", a, b))


def test_word_bimoulds_intertwine(word_moulds):
    MB, MY = word_moulds
    assert sub_hash_Y(MB) == MY.map_coefficients(phi_sharp)
    assert swap_bimould(MY) == MY.map_coefficients(swap_Ybi)
    assert tau_bimould(MB) == MB.map_coefficients(tau_B)


def qsym_character(a, b):
    """A character of the bi-stuffle algebra: evaluation of quasi-symmetric
    sums at finitely many points (a_i, b_i)."""
    def chi(ks, ms):
        s = Fraction(0)
        for idx in itertools.combinations(range(len(a)), len(ks)):
            p = Fraction(1)
            for i, k, m in zip(reversed(idx), ks, ms):
                p *= a[i] ** k * b[i] ** m
            s += p
        return s
    return chi


def character_bimould(chi, W, D):
    parts = {0: TruncPoly.constant(Fraction(1), 0, W)}
    for d in range(1, D + 1):
        t = {}
        for e in monomials(2 * d, W - d):
            ks = [e[2 * i] + 1 for i in range(d)]
            ms = [e[2 * i + 1] for i in range(d)]
            t[e] = chi(ks, ms) / math.prod(math.factorial(m) for m in ms)
        parts[d] = TruncPoly(2 * d, W - d, t)
    return TruncBimould(parts, W, D)


fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=8, deadline=None)
@given(st.lists(st.tuples(fracs, fracs), min_size=1, max_size=3))
def test_symmetril_iff_b_symmetril_after_substitution(points):
    a = [p[0] for p in points]
    b = [p[1] for p in points]
    M = character_bimould(qsym_character(a, b), 6, 3)
    assert check_symmetril(M)
    assert check_b_symmetril(sub_hash_Y_inv(M))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_swap_tau_intertwined_by_substitution(seed):
    M = random_bimould(random.Random(seed), 3, 6)
    assert tau_bimould(sub_hash_Y_inv(M)) == sub_hash_Y_inv(swap_bimould(M))
    assert bool(check_swap_inv(M)) == bool(check_tau_inv(sub_hash_Y_inv(M)))


def test_random_bimould_not_symmetril():
    M = random_bimould(random.Random(5), 2, 5)
    rep = check_symmetril(M)
    assert not rep and rep.first_failure["depth"] == 2


def test_involutions_and_inverse():
    M = random_bimould(random.Random(2), 3, 6)
    assert swap_bimould(swap_bimould(M)) == M
    assert tau_bimould(tau_bimould(M)) == M
    assert sub_hash_Y_inv(sub_hash_Y(M)) == M


def test_mould_product_unit_and_assoc():
    rng = random.Random(3)
    A, B, C = (random_bimould(rng, 3, 5) for _ in range(3))
    one = unit_bimould(5, 3)
    assert mould_product(one, A) == A == mould_product(A, one)
    assert mould_product(mould_product(A, B), C) == mould_product(A, mould_product(B, C))


def test_stuffle_terms_depth2():
    terms = dict(stuffle_terms((1,), (2,)))
    assert len(terms) == 3


def test_balanced_terms_depth2():
    # n = m = 1: two concatenations and one divided difference in X1, X2
    terms = balanced_terms((1,), (2,))
    assert len(terms) == 3


def _t(*slots):
    return tuple((tuple(xs), tuple(ys)) for xs, ys in slots)


def test_stuffle_terms_depth3_golden():
    expect = {
        _t(((1,), (1,)), ((2,), (2,)), ((3,), (3,))),
        _t(((2,), (2,)), ((1,), (1,)), ((3,), (3,))),
        _t(((2,), (2,)), ((3,), (3,)), ((1,), (1,))),
        _t(((1, 2), (1, 2)), ((3,), (3,))),
        _t(((2,), (2,)), ((1, 3), (1, 3))),
    }
    terms = dict(stuffle_terms((1,), (2, 3)))
    assert set(terms) == expect and set(terms.values()) == {1}


def test_balanced_terms_depth3_golden():
    # the inserted letter carries Y1 + (Y of the B-letter it precedes or ends with)
    expect = {
        _t(((2,), (2,)), ((3,), (3,)), ((1,), (1, 3))),
        _t(((2,), (2,)), ((1,), (1, 2)), ((3,), (1, 3))),
        _t(((1,), (1,)), ((2,), (1, 2)), ((3,), (1, 3))),
        _t(((2,), (2,)), ((1, 3), (1, 3))),
        _t(((1, 2), (1, 2)), ((3,), (1, 3))),
    }
    terms = dict(balanced_terms((1,), (2, 3)))
    assert set(terms) == expect and set(terms.values()) == {1}


def test_divided_difference_exact():
    # (X1^2 - X2^2)/(X1 - X2) = X1 + X2
    p = TruncPoly(4, 3, {(2, 0, 0, 0): Fraction(1), (0, 0, 2, 0): Fraction(-1)})
    q = p.divided_difference(xv(1), xv(2))
    assert q == TruncPoly(4, 2, {(1, 0, 0, 0): Fraction(1), (0, 0, 1, 0): Fraction(1)})


def test_divided_difference_not_divisible():
    p = TruncPoly(4, 3, {(1, 0, 0, 0): Fraction(1)})
    with pytest.raises(DividedDifferenceError):
        p.divided_difference(xv(1), xv(2))


def test_truncation_error():
    M = random_bimould(random.Random(0), 2, 4)
    with pytest.raises(TruncationError):
        M[2].truncate(M[2].degree + 1)
    with pytest.raises(TruncationError):
        M[1].coefficient((9, 0))


def test_json_roundtrip():
    M = random_bimould(random.Random(4), 2, 4)
    assert TruncBimould.from_json(M.to_json()) == M


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_substitution_is_ring_map(seed):
    rng = random.Random(seed)
    p = TruncPoly(4, 4, {e: Fraction(rng.randint(-3, 3)) for e in monomials(4, 4) if rng.random() < .3})
    q = TruncPoly(4, 4, {e: Fraction(rng.randint(-3, 3)) for e in monomials(4, 4) if rng.random() < .3})
    forms = [{xv(1): 1, xv(2): -1}, {yv(2): 1}, {xv(2): 1}, {yv(1): 1, yv(2): 1}]
    assert p.mul(q).substitute(forms, 4) == p.substitute(forms, 4).mul(q.substitute(forms, 4))
