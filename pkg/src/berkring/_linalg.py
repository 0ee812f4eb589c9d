"""Dense exact linear algebra over Fraction entries.

Small helper used by the acyclicity checker: reduced row echelon form,
nullspace bases and column-space membership, all exact.  Matrices are
lists of row lists.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def rref(matrix: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column indices."""
    m = [row[:] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def nullspace(matrix: Matrix) -> list[Vector]:
    """Basis of the right kernel (vectors indexed by columns)."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [[Fraction(i == j) for i in range(cols)] for j in range(cols)]
    reduced, pivots = rref(matrix)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -reduced[r][f]
        basis.append(vec)
    return basis


def solve_in_column_space(matrix: Matrix, target: Vector) -> Vector | None:
    """A solution x of matrix @ x = target, or None if inconsistent."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows != len(target):
        raise ValueError("dimension mismatch")
    augmented = [row[:] + [target[i]] for i, row in enumerate(matrix)]
    reduced, pivots = rref(augmented)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = reduced[r][cols]
    return x


def matvec(matrix: Matrix, x: Sequence[Fraction]) -> Vector:
    return [sum((row[j] * x[j] for j in range(len(x)) if x[j] != 0), Fraction(0)) for row in matrix]
