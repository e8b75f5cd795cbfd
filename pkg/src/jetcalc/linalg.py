"""Exact row reduction over Q.

Matrices are lists of rows, rows are lists of :class:`Fraction`.  Pivots are
always the first nonzero entry of a row, scanning columns left to right, so the
column order fixed by the caller decides which columns become pivots.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form with zero rows dropped.

    Returns ``(matrix, pivot_columns)``.
    """
    work = [list(r) for r in rows if any(r)]
    for r in work:
        if len(r) != ncols:
            raise ValueError(f"row of length {len(r)} in a {ncols}-column matrix")
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(work):
            break
        pr = next((i for i in range(top, len(work)) if work[i][col]), None)
        if pr is None:
            continue
        work[top], work[pr] = work[pr], work[top]
        prow = work[top]
        inv = 1 / prow[col]
        if inv != 1:
            for j in range(col, ncols):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(col, ncols) if prow[j]]
        for i, row in enumerate(work):
            if i != top and row[col]:
                f = row[col]
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(col)
        top += 1
    return work[:top], pivots


def reduce_vector(v: Sequence[Fraction], basis: Matrix, pivots: Sequence[int]) -> list[Fraction]:
    """Remainder of ``v`` modulo the row space of an rref ``basis``: zero at every pivot column."""
    out = list(v)
    for row, p in zip(basis, pivots):
        f = out[p]
        if f:
            for j, x in enumerate(row):
                if x:
                    out[j] -= f * x
    return out


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """A basis of {x : A x = 0}, returned in rref (hence canonical)."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return rref(basis, ncols)[0]


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    a = [list(map(Fraction, r)) for r in m]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return det


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [
        [sum((row[t] * b[t][j] for t in range(len(b))), Fraction(0)) for j in range(cols)]
        for row in a
    ]
