"""Small exact linear algebra over :class:`fractions.Fraction`."""
from __future__ import annotations

from fractions import Fraction


def rref(rows, ncols: int):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    A = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : A v = 0}``."""
    R, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1]) if rows else 0
