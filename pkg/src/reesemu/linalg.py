"""Fraction-free Gaussian elimination over the integers.

A small pure-Python reference used to cross-check the flint-backed kernel
computations in :mod:`reesemu.oracle`.  Fine for a few hundred unknowns.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def bareiss_echelon(matrix: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Row echelon form by Bareiss elimination, returning ``(rows, pivot_columns)``.

    Every intermediate entry is an exact integer (a minor of the input).
    """
    rows = [list(map(int, r)) for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    prev = 1
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][col]
        for i in range(r + 1, len(rows)):
            lead = rows[i][col]
            row_i = rows[i]
            row_r = rows[r]
            for j in range(col, ncols):
                # exact division is the Bareiss identity (Sylvester)
                row_i[j] = (piv * row_i[j] - lead * row_r[j]) // prev
        pivots.append(col)
        prev = piv
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix: Sequence[Sequence[int]]) -> int:
    return len(bareiss_echelon(matrix)[1])


def nullspace(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Primitive integer basis of the right kernel, one vector per free column."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    echelon, pivots = bareiss_echelon(matrix) if matrix else ([], [])
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        # back substitution from the last pivot row upwards
        for k in range(len(pivots) - 1, -1, -1):
            row = echelon[k]
            p = pivots[k]
            acc = sum((row[j] * x[j] for j in range(p + 1, ncols) if x[j]), Fraction(0))
            x[p] = -acc / row[p]
        basis.append(_primitive(x))
    return basis


def _primitive(vec: list[Fraction]) -> list[int]:
    den = 1
    for q in vec:
        den = den * q.denominator // gcd(den, q.denominator)
    ints = [int(q * den) for q in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints
