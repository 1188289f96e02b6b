from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qmzv.qseries import (
    DivergentError, QSeries, bernoulli, delta_series, depth1_balanced_closed_form,
    divisor_sum_series, eval_float, format_qseries, generic_qzeta, parse_qseries,
    partition_gen, qderiv,
)

F = Fraction


def test_bernoulli():
    assert bernoulli(0) == 1
    assert bernoulli(1) == F(-1, 2)
    assert bernoulli(2) == F(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(4) == F(-1, 30)
    assert bernoulli(12) == F(-691, 2730)


def test_generic_goldens():
    assert generic_qzeta([2], [[0, 1]], 4) == QSeries([0, 1, 3, 4, 7])
    # t/(1-t) summed: number of divisors
    assert generic_qzeta([1], [[0, 1]], 6) == QSeries([0, 1, 2, 2, 3, 2, 4])
    assert generic_qzeta([], [], 5) == QSeries([1], 5)
    assert generic_qzeta([2, 1], [[0, 1], [0, 1]], 6) == QSeries([0, 0, 0, 1, 2, 6, 7])


def test_generic_divergent():
    with pytest.raises(DivergentError):
        generic_qzeta([0], [[0, 1]], 5)
    with pytest.raises(DivergentError):
        generic_qzeta([2], [[1]], 5)


def test_generic_nested_sum_oracle():
    # brute force over n1 > n2 with q^n/(1-q^n)^s expanded by hand
    N = 8
    def term(s, n):
        out = [F(0)] * (N + 1)
        i = 0
        from math import comb
        while n * (1 + i) <= N:
            out[n * (1 + i)] += comb(s + i - 1, i)
            i += 1
        return out
    expect = [F(0)] * (N + 1)
    for n1 in range(1, N + 1):
        for n2 in range(1, n1):
            a, b = term(3, n1), term(1, n2)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    if x and y and i + j <= N:
                        expect[i + j] += x * y
    assert generic_qzeta([3, 1], [[0, 1], [0, 1]], N) == QSeries(expect)


def test_generic_stuffle_depth1():
    # zeta(2) zeta(2) = 2 zeta(2,2) + zeta(4) for R = t, t and t^2
    N = 12
    a = generic_qzeta([2], [[0, 1]], N)
    lhs = a * a
    rhs = 2 * generic_qzeta([2, 2], [[0, 1], [0, 1]], N) + generic_qzeta([4], [[0, 0, 1]], N)
    assert lhs == rhs


def test_depth1_closed_form():
    assert depth1_balanced_closed_form(1, 1, 5) == QSeries([F(-1, 24), 1, 3, 4, 7, 6])
    assert depth1_balanced_closed_form(2, 0, 5) == QSeries([F(-1, 24), 1, 3, 4, 7, 6])
    assert depth1_balanced_closed_form(1, 0, 5) == QSeries([0, 1, 2, 2, 3, 2])
    assert depth1_balanced_closed_form(3, 0, 4)[0] == 0
    assert depth1_balanced_closed_form(4, 0, 1)[0] == F(1, 1440)


def test_partition_gen():
    # one distinct part size: sum over i, m of i^a m^b q^{im}
    for a, b in [(0, 0), (1, 0), (2, 1)]:
        assert partition_gen([a, b], 1, 10) == QSeries(divisor_sum_series(a, b, 10))
    # exactly two distinct part sizes: 2+1; 3+1, 2+1+1; ...
    assert partition_gen([0, 0, 0, 0], 2, 6) == QSeries([0, 0, 0, 1, 2, 5, 6])


def test_delta():
    assert delta_series(6) == QSeries([0, 1, -24, 252, -1472, 4830, -6048])


def test_format_parse():
    f = QSeries([F(-1, 24), 1, 0, -3], 5)
    assert format_qseries(f) == "-1/24 + q - 3q^3"
    assert parse_qseries(format_qseries(f), 5) == f
    assert format_qseries(QSeries([], 3)) == "0"


def test_eval_float():
    f = QSeries([1, 2, 3], 2)
    assert abs(eval_float(f, 0.5) - 2.75) < 1e-12


coeffs = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=1, max_size=8)


@settings(max_examples=60, deadline=None)
@given(coeffs, coeffs)
def test_qderiv_leibniz(a, b):
    N = 7
    f, g = QSeries(a, N), QSeries(b, N)
    assert qderiv(f * g) == qderiv(f) * g + f * qderiv(g)


@settings(max_examples=60, deadline=None)
@given(coeffs)
def test_text_roundtrip(a):
    f = QSeries(a, 9)
    assert parse_qseries(format_qseries(f), 9) == f
