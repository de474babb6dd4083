"""Small exact matrix utilities: determinants and seeded unimodular sampling."""

from __future__ import annotations

import random
from fractions import Fraction

Matrix = tuple[tuple[int, ...], ...]


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def det(M) -> Fraction:
    """Determinant over Q by fraction-free-ish Gaussian elimination."""
    n = len(M)
    rows = [[Fraction(x) for x in row] for row in M]
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    sign = 1
    for c in range(n):
        pivot = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            sign = -sign
        for r in range(c + 1, n):
            if rows[r][c]:
                factor = rows[r][c] / rows[c][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[c])]
    result = Fraction(sign)
    for i in range(n):
        result *= rows[i][i]
    return result


def seeded_unimodular(rng: random.Random, n: int, spread: int = 3, attempts: int = 5000) -> Matrix:
    """Random integer matrix with entries in {-spread..spread} and det +-1."""
    for _ in range(attempts):
        M = tuple(tuple(rng.randint(-spread, spread) for _ in range(n)) for _ in range(n))
        if abs(det(M)) == 1:
            return M
    raise RuntimeError("failed to sample a unimodular matrix")
