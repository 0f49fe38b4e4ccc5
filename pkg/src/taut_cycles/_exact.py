"""Small exact linear algebra over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


def vec(xs: Sequence) -> Vector:
    return tuple(Fraction(x) for x in xs)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def matvec(a: Matrix, v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in a)


def reflection_matrix(alpha: Sequence[int]) -> Matrix:
    """Orthogonal reflection through the hyperplane perpendicular to ``alpha``."""
    n = len(alpha)
    norm = Fraction(dot(alpha, alpha))
    return tuple(
        tuple(Fraction(int(i == j)) - 2 * Fraction(alpha[i] * alpha[j]) / norm for j in range(n))
        for i in range(n)
    )


def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def solve(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Solve the square nonsingular system ``a x = b``; None if singular."""
    n = len(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, piv = row_reduce(aug)
    if piv != list(range(n)):
        return None
    return tuple(red[i][n] for i in range(n))
