"""Finite-dimensional multi-matrix algebras, unital inclusions and relative commutants."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Sequence

from .fusion import tensor_power_decomposition
from .intmat import Matrix, matpow, support
from .module import BimoduleAction

BRUTE_FORCE_BOUND = 2000


@dataclass(frozen=True)
class MultiMatrixShape:
    """``sum_i M_{size_i}``, one block per ``(label, size)``."""

    blocks: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if any(size < 1 for _, size in self.blocks):
            raise ValueError("block sizes must be positive")

    @classmethod
    def from_sizes(cls, sizes: Sequence[int], labels: Sequence[str] | None = None) -> "MultiMatrixShape":
        labels = labels or [str(i) for i in range(len(sizes))]
        return cls(tuple(zip(labels, (int(s) for s in sizes))))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.blocks)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(x for x, _ in self.blocks)

    @property
    def dimension(self) -> int:
        return sum(s * s for s in self.sizes)


@dataclass(frozen=True)
class MultiMatrixInclusion:
    source: MultiMatrixShape
    target: MultiMatrixShape
    multiplicity: Matrix  # target blocks x source blocks

    def __post_init__(self):
        p, q, lam = self.source.sizes, self.target.sizes, self.multiplicity
        if len(lam) != len(q) or any(len(row) != len(p) for row in lam):
            raise ValueError("multiplicity matrix must be (target blocks) x (source blocks)")
        if any(x < 0 for row in lam for x in row):
            raise ValueError("multiplicities must be nonnegative")
        for j, row in enumerate(lam):
            if sum(x * s for x, s in zip(row, p)) != q[j]:
                raise ValueError(f"inclusion is not unital at target block {self.target.labels[j]}")
        for i in range(len(p)):
            if not any(row[i] for row in lam):
                raise ValueError(f"source block {self.source.labels[i]} maps to zero")


@dataclass(frozen=True)
class EmbeddingWitness:
    """``assignment[b][s]`` copies of source block ``s`` sit inside target block ``b``."""

    assignment: Matrix
    method: str = "search"

    def check(self, source: MultiMatrixShape, target: MultiMatrixShape) -> bool:
        S, p, q = self.assignment, source.sizes, target.sizes
        if len(S) != len(q) or any(len(row) != len(p) for row in S):
            return False
        if any(x < 0 for row in S for x in row):
            return False
        if any(sum(x * s for x, s in zip(row, p)) != qb for row, qb in zip(S, q)):
            return False
        return all(any(row[s] for row in S) for s in range(len(p)))


def inclusion_between_levels(action: BimoduleAction, n: int, m: int, horizon: int | None = None) -> MultiMatrixInclusion:
    """``A_n`` inside ``A_{n+m}`` for the tower ``End(m0 <| Y^n)``."""
    if n < 0 or m < 0:
        raise ValueError("levels must be nonnegative")
    if horizon is not None and n + m > horizon:
        raise ValueError(f"level {n + m} is beyond the horizon {horizon}")
    u = action.tower_vector(n)
    w = action.tower_vector(n + m)
    src, tgt = support(u), support(w)
    power = matpow(action.right_matrix(), m)
    objs = action.objects
    lam = tuple(tuple(power[j][i] for i in src) for j in tgt)
    return MultiMatrixInclusion(
        MultiMatrixShape(tuple((objs[i], u[i]) for i in src)),
        MultiMatrixShape(tuple((objs[j], w[j]) for j in tgt)),
        lam,
    )


def relative_commutant_shape(inc: MultiMatrixInclusion) -> MultiMatrixShape:
    """One block ``M_lambda`` for each nonzero multiplicity ``lambda``."""
    blocks = []
    for i, src in enumerate(inc.source.labels):
        for j, tgt in enumerate(inc.target.labels):
            lam = inc.multiplicity[j][i]
            if lam > 0:
                blocks.append((f"{src}->{tgt}", lam))
    return MultiMatrixShape(tuple(blocks))


def _insert_row(pivots: dict[int, dict[int, int]], row: dict[int, int]) -> bool:
    """Reduce ``row`` against an echelon basis with integer arithmetic; keep it if independent."""
    while row:
        lead = min(row)
        piv = pivots.get(lead)
        if piv is None:
            g = 0
            for c in row.values():
                g = gcd(g, c)
            pivots[lead] = {v: c // g for v, c in row.items()}
            return True
        a, b = piv[lead], row[lead]
        new: dict[int, int] = {}
        for v, c in row.items():
            new[v] = a * c
        for v, c in piv.items():
            x = new.get(v, 0) - b * c
            if x:
                new[v] = x
            else:
                new.pop(v, None)
        row = new
    return False


def brute_force_commutant(inc: MultiMatrixInclusion, bound: int = BRUTE_FORCE_BOUND) -> int:
    """Dimension of the relative commutant, from the linear system ``[iota(e), x] = 0``.

    ``e`` runs over all matrix units of the source. The inclusion is realised by
    placing copies of each source block down the diagonal of each target block
    in order; elimination is exact over the rationals.
    """
    if inc.target.dimension > bound:
        raise ValueError(f"target dimension {inc.target.dimension} exceeds the oracle bound {bound}")
    p = inc.source.sizes
    total = 0
    for j, q in enumerate(inc.target.sizes):
        # offsets[i] lists where each copy of source block i starts inside target block j
        offsets: list[list[int]] = [[] for _ in p]
        pos = 0
        for i, size in enumerate(p):
            for _ in range(inc.multiplicity[j][i]):
                offsets[i].append(pos)
                pos += size
        assert pos == q

        pivots: dict[int, dict[int, int]] = {}
        seen: set[tuple] = set()
        for i, size in enumerate(p):
            if not offsets[i]:
                continue
            for a in range(size):
                for b in range(size):
                    # image of the matrix unit E_ab: ones at (off + a, off + b) for each copy
                    ones = [(off + a, off + b) for off in offsets[i]]
                    eqs: dict[tuple[int, int], dict[int, int]] = {}
                    # (iota(e) x)_{r,c} = sum_k iota(e)_{r,k} x_{k,c}
                    for r, kk in ones:
                        for c in range(q):
                            eq = eqs.setdefault((r, c), {})
                            var = kk * q + c
                            eq[var] = eq.get(var, 0) + 1
                    # (x iota(e))_{r,c} = sum_k x_{r,k} iota(e)_{k,c}
                    for kk, c in ones:
                        for r in range(q):
                            eq = eqs.setdefault((r, c), {})
                            var = r * q + kk
                            eq[var] = eq.get(var, 0) - 1
                    for eq in eqs.values():
                        row = {v: x for v, x in eq.items() if x}
                        if not row:
                            continue
                        key = tuple(sorted(row.items()))
                        if key in seen:
                            continue
                        seen.add(key)
                        _insert_row(pivots, row)
        total += q * q - len(pivots)
    return total


@lru_cache(maxsize=4096)
def _representations(sizes: tuple[int, ...], start: int, remaining: int) -> dict[int, tuple[int, ...]]:
    """Ways to write ``remaining`` as ``sum_{s >= start} c_s sizes[s]``.

    Returns one coefficient tuple per set (bitmask) of source blocks used.
    """
    if start == len(sizes):
        return {0: ()} if remaining == 0 else {}
    out: dict[int, tuple[int, ...]] = {}
    size = sizes[start]
    for c in range(remaining // size, -1, -1):
        for mask, rest in _representations(sizes, start + 1, remaining - c * size).items():
            key = mask | (1 << start) if c else mask
            if key not in out:
                out[key] = (c,) + rest
    return out


def embedding_feasible(source: MultiMatrixShape, target: MultiMatrixShape) -> EmbeddingWitness | None:
    """A unital embedding pattern of ``source`` into ``target`` hitting every source block, or None."""
    p = source.sizes
    full = (1 << len(p)) - 1
    # reachable[mask] = chosen rows for the target blocks processed so far
    reachable: dict[int, tuple[tuple[int, ...], ...]] = {0: ()}
    for q in target.sizes:
        reps = _representations(p, 0, q)
        if not reps:
            return None
        nxt: dict[int, tuple[tuple[int, ...], ...]] = {}
        for mask, rows in reachable.items():
            for used, coeffs in sorted(reps.items()):
                key = mask | used
                if key not in nxt:
                    nxt[key] = rows + (coeffs,)
        reachable = nxt
    if full not in reachable:
        return None
    return EmbeddingWitness(reachable[full], "search")


def by_shape(action: BimoduleAction, m: int) -> tuple[MultiMatrixShape, tuple[int, ...]]:
    """Shape of ``End(Y^m)`` over the dual ring, with the dual simples it lives on."""
    c = tensor_power_decomposition(action.dual_ring, action.Y, m)
    idx = support(c)
    labels = action.dual_ring.labels
    return MultiMatrixShape(tuple((labels[s], c[s]) for s in idx)), idx


def central_capacity(action: BimoduleAction, m: int, n: int, horizon: int | None = None) -> EmbeddingWitness | None:
    """Unital embedding of ``End(Y^m)`` into the commutant of ``A_n`` in ``A_{n+m}``.

    The canonical pattern puts ``(R_s)_{w,v}`` copies of the block of dual simple
    ``s`` into the commutant block ``v -> w``; search is the fallback.
    """
    inc = inclusion_between_levels(action, n, m, horizon)
    target = relative_commutant_shape(inc)
    source, idx = by_shape(action, m)
    u, w = action.tower_vector(n), action.tower_vector(n + m)
    rows = []
    for v in support(u):
        for t in support(w):
            lam = inc.multiplicity[support(w).index(t)][support(u).index(v)]
            if lam > 0:
                rows.append(tuple(action.R[s][t][v] for s in idx))
    canonical = EmbeddingWitness(tuple(rows), "canonical")
    if canonical.check(source, target):
        return canonical
    return embedding_feasible(source, target)
