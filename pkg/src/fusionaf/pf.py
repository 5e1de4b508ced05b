"""Perron-Frobenius enclosures for nonnegative integer matrices.

The spectral radius is bracketed by Collatz-Wielandt ratios ``min (Ax)_i / x_i``
and ``max (Ax)_i / x_i`` of a positive vector ``x``. The iteration runs on
``A + I`` with integer vectors rescaled to a fixed number of bits, so the bounds
are exact rationals even though the iterate is an approximation. This is the
only inexact computation in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import graphs
from .intmat import Matrix, as_matrix, submatrix, successors

MAX_ITERATIONS = 200_000


@dataclass(frozen=True)
class FPEnclosure:
    lower: Fraction
    upper: Fraction
    vector: tuple[float, ...]

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return float((self.lower + self.upper) / 2)

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper


def _block_bounds(block: Matrix, tol: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    k = len(block)
    shifted = [[block[i][j] + (i == j) for j in range(k)] for i in range(k)]
    x = [1 << bits] * k
    lo, hi = Fraction(0), None
    for _ in range(MAX_ITERATIONS):
        y = [sum(a * b for a, b in zip(row, x)) for row in shifted]
        ratios = [Fraction(yi, xi) for yi, xi in zip(y, x)]
        lo = max(lo, min(ratios))
        hi = min(hi, max(ratios)) if hi is not None else max(ratios)
        if hi - lo <= tol:
            return lo - 1, hi - 1
        top = max(y)
        x = [max(1, (yi << bits) // top) for yi in y]
    raise RuntimeError("Collatz-Wielandt bounds did not reach the requested tolerance")


def _eigenvector(m: Matrix, iterations: int = 20_000) -> tuple[float, ...]:
    k = len(m)
    x = [1.0 / k] * k
    for _ in range(iterations):
        y = [x[i] + sum(m[i][j] * x[j] for j in range(k)) for i in range(k)]
        s = sum(y)
        y = [v / s for v in y]
        if max(abs(a - b) for a, b in zip(x, y)) < 1e-15:
            return tuple(y)
        x = y
    return tuple(x)


def fp_dimension(matrix: Sequence[Sequence[int]], tolerance: float | Fraction = 1e-10) -> FPEnclosure:
    """Rational enclosure ``[lower, upper]`` of the spectral radius, width at most ``tolerance``.

    The spectral radius of a reducible matrix is the largest one among its
    strongly connected diagonal blocks, so each block is bracketed separately.
    """
    m = as_matrix(matrix)
    k = len(m)
    if k == 0 or any(len(row) != k for row in m):
        raise ValueError("matrix must be square and nonempty")
    if any(x < 0 for row in m for x in row):
        raise ValueError("matrix must be nonnegative")
    if not any(x for row in m for x in row):
        raise ValueError("zero matrix has no Perron-Frobenius data")
    tol = Fraction(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")

    bits = 64 + max(0, math.ceil(-math.log2(tol)))
    succ = successors(m)
    lo_best, hi_best = Fraction(0), Fraction(0)
    for comp in graphs.strongly_connected_components(succ):
        if not graphs.is_nontrivial(succ, comp):
            continue
        lo, hi = _block_bounds(submatrix(m, comp, comp), tol, bits)
        lo_best = max(lo_best, lo)
        hi_best = max(hi_best, hi)
    return FPEnclosure(lo_best, hi_best, _eigenvector(m))
