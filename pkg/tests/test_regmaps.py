import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qmzv.quasishuffle import BALANCED_B, STUFFLE_YBI, qshuffle
from qmzv.regmaps import (
    LeadingZeroError, delta_dec0, embed_i, phi_sharp, phi_sharp_inv, reg, reg_by_elimination,
    reg_T, reg_T_inverse, swap_Ybi, tau_B, tau_PY,
)
from qmzv.words import (
    EMPTY, LinComb, Word, b_words, delta_dec, parse_lincomb, parse_word, tensor_map, weight,
    ybi_words, z,
)

P = parse_lincomb


def tensor(*pairs):
    return LinComb({(parse_word(a), parse_word(b)): c for a, b, c in pairs})


def test_reg_T_inverse_goldens():
    assert reg_T_inverse(P("b1 b0")) == {0: P("b1 b0")}
    assert reg_T_inverse(P("b0")) == {1: P("1")}
    assert reg_T_inverse(P("b0 b1")) == {0: P("-b1 b0"), 1: P("b1")}
    assert reg_T_inverse(P("b0 b0")) == {2: P("1/2*1")}


def test_reg_T_roundtrip():
    for w in b_words(4):
        assert reg_T(reg_T_inverse(w)) == LinComb({w: 1})


def test_reg_goldens():
    assert reg(P("b0 b1")) == P("-b1 b0")
    assert reg(P("b0 b2 b0")) == P("-2*b2 b0 b0")
    assert reg(P("b3 b0 b1")) == P("b3 b0 b1")
    for n in range(1, 4):
        assert reg(LinComb({z(*[0] * n): 1})) == LinComb()


def test_reg_two_implementations_agree():
    for n in range(1, 7):
        for w in b_words(n):
            assert reg(w) == reg_by_elimination(w)


def test_reg_idempotent_and_morphism():
    words = [w for n in range(1, 4) for w in b_words(n)]
    for w in words:
        assert reg(reg(w)) == reg(w)
    for u, v in itertools.product(words, repeat=2):
        if weight(u) + weight(v) > 6:
            continue
        assert reg(qshuffle(BALANCED_B, u, v)) == qshuffle(BALANCED_B, reg(u), reg(v))


def test_delta_dec0_goldens():
    assert delta_dec0(z(1, 0)) == tensor(("1", "b1 b0", 1), ("b1 b0", "1", 1))
    assert delta_dec0(z(2)) == tensor(("1", "b2", 1), ("b2", "1", 1))
    assert delta_dec0(z(1, 0, 1)) == tensor(
        ("1", "b1 b0 b1", 1), ("b1", "b1 b0", -1), ("b1 b0", "b1", 1), ("b1 b0 b1", "1", 1))
    with pytest.raises(LeadingZeroError):
        delta_dec0(z(0, 1))


def test_delta_dec0_coassociative():
    for n in range(1, 6):
        for w in b_words(n, convergent=True):
            d = delta_dec0(w)
            left = LinComb()
            right = LinComb()
            for (a, b_), c in d.terms.items():
                for (a1, a2), c1 in delta_dec0(a).terms.items():
                    left = left + LinComb({(a1, a2, b_): c * c1})
                for (b1, b2), c2 in delta_dec0(b_).terms.items():
                    right = right + LinComb({(a, b1, b2): c * c2})
            assert left == right


def test_tau_goldens():
    assert tau_B(z(2)) == z(1, 0)
    assert tau_B(z(2, 1)) == z(1, 1, 0)
    assert tau_PY(parse_word("ppy")) == parse_word("pyy")
    assert tau_PY(EMPTY) == EMPTY
    with pytest.raises(LeadingZeroError):
        tau_B(z(0, 2))


def test_tau_involution_and_embedding():
    for n in range(1, 7):
        for w in b_words(n, convergent=True):
            assert tau_B(tau_B(w)) == w
            assert weight(tau_B(w)) == weight(w)
            if n <= 5:
                assert tau_PY(embed_i(w)) == embed_i(tau_B(w))


def test_phi_goldens():
    for k, m, fact in [(1, 0, 1), (2, 1, 1), (1, 3, 6), (3, 2, 2)]:
        w = parse_word(f"y({k}|{m})")
        assert phi_sharp(w) == LinComb({z(k, *[0] * m): fact})
    assert phi_sharp(P("y(2|0) y(1|1)")) == P("b2 b1 b0")
    assert phi_sharp(P("y(2|2) y(1|1)")) == \
        P("2*b2 b0 b0 b1 b0 + 4*b2 b0 b1 b0 b0 + 6*b2 b1 b0 b0 b0")


def test_phi_inverse_and_morphism():
    ys = [w for n in range(1, 6) for w in ybi_words(n)]
    for w in ys:
        assert phi_sharp_inv(phi_sharp(w)) == LinComb({w: 1})
    small = [w for n in range(1, 4) for w in ybi_words(n)]
    for u, v in itertools.product(small, repeat=2):
        assert phi_sharp(qshuffle(STUFFLE_YBI, u, v)) == \
            qshuffle(BALANCED_B, phi_sharp(u), phi_sharp(v))


def test_phi_hopf_compatibility():
    for n in range(1, 6):
        for v in ybi_words(n):
            assert tensor_map(delta_dec(v), phi_sharp) == delta_dec0(phi_sharp(v))


def test_swap_goldens():
    assert swap_Ybi(P("y(2|0)")) == P("y(1|1)")
    assert swap_Ybi(P("y(1|1)")) == P("y(2|0)")
    assert swap_Ybi(P("y(3|1)")) == P("1/2*y(2|2)")
    assert phi_sharp(swap_Ybi(P("y(2|0)"))) == tau_B(phi_sharp(P("y(2|0)"))) == P("b1 b0")


def test_swap_single_letter_formula():
    from math import factorial
    for k in range(1, 5):
        for m in range(0, 4):
            w = parse_word(f"y({k}|{m})")
            expect = LinComb({parse_word(f"y({m + 1}|{k - 1})"): Fraction(factorial(m), factorial(k - 1))})
            assert swap_Ybi(w) == expect


def test_swap_involution_and_intertwining():
    for n in range(1, 6):
        for v in ybi_words(n):
            assert swap_Ybi(swap_Ybi(v)) == LinComb({v: 1})
            assert phi_sharp(swap_Ybi(v)) == tau_B(phi_sharp(v))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=5))
def test_reg_lands_in_b0_free_words(s):
    for w in reg(z(*s)).terms:
        assert w[0].idx[0] != 0
