"""Exact integer matrices as tuples of tuples.

Everything here works on Python ints, so entries never overflow. Matrices act
on column vectors: ``matvec(M, v)[i] = sum_j M[i][j] * v[j]``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def zeros(rows: int, cols: int | None = None) -> Matrix:
    cols = rows if cols is None else cols
    return tuple((0,) * cols for _ in range(rows))


def identity(k: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def basis(k: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(k))


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c: int, m: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in m)


def linear_combination(coeffs: Sequence[int], mats: Sequence[Matrix], rows: int, cols: int) -> Matrix:
    out = [[0] * cols for _ in range(rows)]
    for c, m in zip(coeffs, mats):
        if c == 0:
            continue
        for i, row in enumerate(m):
            orow = out[i]
            for j, x in enumerate(row):
                if x:
                    orow[j] += c * x
    return tuple(tuple(r) for r in out)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for x, brow in zip(row, b):
            if x:
                for j, y in enumerate(brow):
                    if y:
                        acc[j] += x * y
        out.append(tuple(acc))
    return tuple(out)


def matvec(m: Matrix, v: Sequence[int]) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v) if x) for row in m)


def matpow(m: Matrix, e: int) -> Matrix:
    if e < 0:
        raise ValueError("negative matrix power")
    result = identity(len(m))
    base = m
    while e:
        if e & 1:
            result = matmul(result, base)
        e >>= 1
        if e:
            base = matmul(base, base)
    return result


def is_positive(m: Matrix) -> bool:
    return all(x > 0 for row in m for x in row)


def is_nonnegative(m: Matrix) -> bool:
    return all(x >= 0 for row in m for x in row)


def submatrix(m: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return tuple(tuple(m[i][j] for j in cols) for i in rows)


def support(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(v) if x)


def permute(m: Matrix, perm: Sequence[int]) -> Matrix:
    """Relabel both indices: entry (i, j) moves to (perm[i], perm[j])."""
    k = len(perm)
    out = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            out[perm[i]][perm[j]] = m[i][j]
    return tuple(tuple(r) for r in out)


def successors(m: Matrix) -> list[list[int]]:
    """Digraph of a square matrix: edge j -> i whenever m[i][j] > 0."""
    k = len(m)
    return [[i for i in range(k) if m[i][j] > 0] for j in range(k)]
