from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qmzv.linalg import InconsistentSystemError, echelon, nullspace, rref, solve_affine

F = Fraction


def matvec(A, x):
    return [sum(F(a) * b for a, b in zip(row, x)) for row in A]


def test_echelon_pivots():
    rows = [[0, 2, 4], [1, 1, 1], [2, 4, 6]]
    ech, piv, origin = echelon(rows, 3)
    assert piv == [0, 1]
    assert origin == [1, 0]
    assert len(ech) == 2


def test_rref_identity_block():
    R, piv = rref([[2, 4], [1, 3]], 2)
    assert R == [[1, 0], [0, 1]] and piv == [0, 1]


def test_nullspace_basis():
    A = [[1, 2, 3], [2, 4, 6]]
    ns = nullspace(A, 3)
    assert ns == [[F(-2), F(1), F(0)], [F(-3), F(0), F(1)]]
    for v in ns:
        assert matvec(A, v) == [0, 0]


def test_solve_affine_particular_and_kernel():
    x, ker = solve_affine([[1, 1, 0], [0, 1, 1]], [F(1, 2), 2], 3)
    assert x == [F(-3, 2), F(2), F(0)]
    assert len(ker) == 1
    assert matvec([[1, 1, 0], [0, 1, 1]], ker[0]) == [0, 0]


def test_inconsistent():
    with pytest.raises(InconsistentSystemError) as e:
        solve_affine([[1, 1], [2, 2]], [1, 3], 2)
    assert e.value.row is not None


def test_no_rows():
    x, ker = solve_affine([], [], 2)
    assert x == [0, 0] and len(ker) == 2


small = st.fractions(min_value=-5, max_value=5, max_denominator=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_solution_satisfies_system(m, n, data):
    A = [[data.draw(small) for _ in range(n)] for _ in range(m)]
    x0 = [data.draw(small) for _ in range(n)]
    b = matvec(A, x0)
    x, ker = solve_affine(A, b, n)
    assert matvec(A, x) == b
    for v in ker:
        assert matvec(A, v) == [0] * m
    assert len(ker) == n - len(rref(A, n)[1])
