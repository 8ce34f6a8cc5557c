"""Exact integer matrix helpers (fraction-free elimination)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Matrix = list[list[int]]


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss elimination; exact for integer input."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def vecmat(v: Sequence[int], m: Sequence[Sequence[int]]) -> list[int]:
    """Row vector times matrix."""
    cols = len(m[0]) if m else 0
    return [sum(v[i] * m[i][j] for i in range(len(m))) for j in range(cols)]


def left_kernel_vector(m: Sequence[Sequence[int]]) -> Optional[list[int]]:
    """A primitive nonzero integer ``v`` with ``v M = 0``, or None if there is none."""
    rows = len(m)
    if rows == 0:
        return None
    # solve M^T v = 0 by reduced row echelon form over the rationals
    a = [[Fraction(x) for x in row] for row in transpose(m)]
    ncols = rows
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    v = [Fraction(0)] * ncols
    v[f] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -a[i][f]
    denom = 1
    for x in v:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    out = [int(x * denom) for x in v]
    g = 0
    for x in out:
        g = gcd(g, x)
    out = [x // g for x in out]
    lead = next(x for x in out if x)
    return [-x for x in out] if lead < 0 else out
