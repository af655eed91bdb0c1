"""Exact linear algebra over the rationals.

Small dense routines on lists of :class:`fractions.Fraction`. Sizes here
never exceed a few dozen rows, so plain Gauss-Jordan is adequate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def determinant(rows: Sequence[Sequence]) -> Fraction:
    a = to_matrix(rows)
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f /= p
                row_r, row_c = a[r], a[col]
                for k in range(col, n):
                    row_r[k] -= f * row_c[k]
    return det


def rref(aug: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form of an augmented matrix, in place.

    Returns the matrix and the list of pivot columns (the last column is
    treated as the right-hand side and never pivoted on).
    """
    rows = len(aug)
    cols = len(aug[0]) - 1 if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        p = aug[r][c]
        if p != 1:
            aug[r] = [v / p for v in aug[r]]
        row_r = aug[r]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], row_r)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return aug, pivots


def solve_affine(a: Sequence[Sequence], b: Sequence) -> tuple[Vector, list[Vector]] | None:
    """All solutions of ``a @ z = b`` as ``(particular, null_basis)``.

    Returns ``None`` when the system is inconsistent. The particular solution
    sets every free variable to zero.
    """
    m = len(a)
    ncols = len(a[0])
    aug = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    aug, pivots = rref(aug)
    for i in range(len(pivots), m):
        if aug[i][-1] != 0:
            return None
    particular = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        particular[c] = aug[i][-1]
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -aug[i][f]
        basis.append(v)
    return particular, basis


def matvec(a: Sequence[Sequence], x: Sequence) -> Vector:
    return [sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a]


def stationary_family(q: Sequence[Sequence]) -> tuple[Vector, list[Vector]] | None:
    """Solve ``q @ y = lam * 1`` with ``sum(y) = 1`` for ``(y, lam)``.

    Returns the affine solution set over the unknowns ``(y_1..y_k, lam)``, or
    ``None`` when no solution exists.
    """
    k = len(q)
    rows = [[Fraction(v) for v in q[i]] + [Fraction(-1)] for i in range(k)]
    rows.append([Fraction(1)] * k + [Fraction(0)])
    rhs = [Fraction(0)] * k + [Fraction(1)]
    return solve_affine(rows, rhs)
