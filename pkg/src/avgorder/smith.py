"""Exact integer lattice reductions on list-of-lists matrices.

Everything here works on Python ints so that no entry can overflow.
"""

from __future__ import annotations

import math
from itertools import combinations

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def det(a: Matrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def column_echelon_basis(m: Matrix, ncols: int) -> Matrix:
    """Reduce the columns of an s x n integer matrix to a basis of their span.

    Integer column operations bring the matrix to column echelon form; the
    nonzero columns are returned as an s x r matrix with positive pivots.
    """
    s = len(m)
    cols = [[m[i][j] for i in range(s)] for j in range(ncols)]
    basis: list[list[int]] = []
    for row in range(s):
        live = [c for c in cols if c[row] != 0]
        rest = [c for c in cols if c[row] == 0]
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[row]))
            piv = live[0]
            nxt = []
            for c in live[1:]:
                q = c[row] // piv[row]
                c = [x - q * y for x, y in zip(c, piv)]
                (nxt if c[row] != 0 else rest).append(c)
            live = [piv] + nxt
        if live:
            piv = live[0]
            if piv[row] < 0:
                piv = [-x for x in piv]
            basis.append(piv)
        cols = [c for c in rest if any(c)]
    return [[basis[j][i] for j in range(len(basis))] for i in range(s)]


def smith_normal_form(a: Matrix, ncols: int) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U * A * V = D, U and V unimodular.

    D is diagonal with nonnegative entries d_1 | d_2 | ... ; zero entries, if
    any, come last.
    """
    s, n = len(a), ncols
    d = [row[:] for row in a]
    u = identity(s)
    v = identity(n)

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for mat in (d, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        for mat in (d, u):
            mat[dst] = [x + q * y for x, y in zip(mat[dst], mat[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for mat in (d, v):
            for row in mat:
                row[dst] += q * row[src]

    for k in range(min(s, n)):
        nonzero = [(abs(d[i][j]), i, j) for i in range(k, s) for j in range(k, n) if d[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(k, i)
        swap_cols(k, j)
        while True:
            done = True
            for i in range(k + 1, s):
                if d[i][k]:
                    q = d[i][k] // d[k][k]
                    add_row(i, k, -q)
                    if d[i][k]:
                        swap_rows(k, i)
                        done = False
            for j in range(k + 1, n):
                if d[k][j]:
                    q = d[k][j] // d[k][k]
                    add_col(j, k, -q)
                    if d[k][j]:
                        swap_cols(k, j)
                        done = False
            if not done:
                continue
            # pivot must divide the remaining block
            bad = next(
                ((i, j) for i in range(k + 1, s) for j in range(k + 1, n) if d[i][j] % d[k][k]),
                None,
            )
            if bad is None:
                break
            add_row(k, bad[0], 1)
        if d[k][k] < 0:
            u[k] = [-x for x in u[k]]
            d[k] = [-x for x in d[k]]
    return u, d, v


def elementary_divisors(a: Matrix, ncols: int) -> list[int]:
    _, d, _ = smith_normal_form(a, ncols)
    return [d[i][i] for i in range(min(len(a), ncols)) if d[i][i]]


def minor_gcd(a: Matrix, ncols: int, size: int) -> int:
    """gcd of the absolute values of all size x size minors (brute force)."""
    g = 0
    for rows in combinations(range(len(a)), size):
        for cols in combinations(range(ncols), size):
            g = math.gcd(g, det([[a[i][j] for j in cols] for i in rows]))
    return abs(g)


def matrix_rank(a: Matrix, ncols: int) -> int:
    return len(elementary_divisors(a, ncols))
