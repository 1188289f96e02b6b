"""Exact linear algebra over the rationals.

Elimination is fraction-free: rows are scaled to integers and reduced with
integer row operations (divided by the row gcd after each step), then the
reduced echelon form is read off with Fractions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


class InconsistentSystemError(ArithmeticError):
    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


def _integer_row(row: Sequence) -> list[int]:
    fr = [Fraction(x) for x in row]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints


def echelon(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[int]], list[int], list[int]]:
    """Fraction-free row echelon form.

    Returns (reduced integer rows, pivot columns, original row index of each
    pivot row).
    """
    work = [(_integer_row(r), i) for i, r in enumerate(rows)]
    pivots: list[int] = []
    out: list[tuple[list[int], int]] = []
    col = 0
    while work and col < ncols:
        k = next((t for t, (r, _) in enumerate(work) if r[col]), None)
        if k is None:
            col += 1
            continue
        prow, origin = work.pop(k)
        p = prow[col]
        new = []
        for r, i in work:
            a = r[col]
            if a:
                r = [p * x - a * y for x, y in zip(r, prow)]
                g = 0
                for v in r:
                    g = math.gcd(g, v)
                if g > 1:
                    r = [v // g for v in r]
            new.append((r, i))
        work = new
        out.append((prow, origin))
        pivots.append(col)
        col += 1
    return [r for r, _ in out], pivots, [i for _, i in out]


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    ech, pivots, _ = echelon(rows, ncols)
    R = [[Fraction(v, r[c]) for v in r] for r, c in zip(ech, pivots)]
    for i in range(len(R) - 1, -1, -1):
        c = pivots[i]
        for j in range(i):
            f = R[j][c]
            if f:
                R[j] = [x - f * y for x, y in zip(R[j], R[i])]
    return R, pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel; basis vectors have a 1 in one free column
    and 0 in the others, free columns taken in increasing order."""
    R, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in zip(R, pivots):
            v[c] = -r[f]
        basis.append(v)
    return basis


def solve_affine(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Solve A x = b exactly.  Free variables are set to zero in the
    particular solution.  Returns (particular solution, kernel basis)."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech, pivots, origins = echelon(aug, ncols + 1)
    if ncols in pivots:
        i = pivots.index(ncols)
        raise InconsistentSystemError("inconsistent linear system", origins[i])
    R, piv = rref(aug, ncols + 1)
    x = [Fraction(0)] * ncols
    for r, c in zip(R, piv):
        x[c] = r[ncols]
    kernel = nullspace(rows, ncols) if rows else [
        [Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    return x, kernel
