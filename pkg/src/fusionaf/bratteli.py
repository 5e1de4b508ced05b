"""Stationary Bratteli diagrams and the simplicity of their AF limits.

A stationary diagram is one nonnegative integer matrix ``A`` used at every
level plus an initial dimension vector ``d(0)``; level ``n`` carries
``d(n) = A^n d(0)`` and the algebra ``sum_v M_{d_v(n)}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import graphs
from .fusion import FusionRing, fusion_matrix, wielandt_bound
from .intmat import Matrix, Vector, as_matrix, basis, is_positive, matmul, matpow, matvec, submatrix, successors, transpose
from .module import BimoduleAction
from .pf import FPEnclosure, fp_dimension


class UnsupportedCase(ValueError):
    pass


def default_horizon(k: int) -> int:
    return max(8, 2 * (k - 1) ** 2 + 2)


@dataclass(frozen=True)
class BratteliDiagram:
    vertices: tuple[str, ...]
    adjacency: Matrix
    initial: Vector
    horizon: int
    _dims: tuple[Vector, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        k = len(self.vertices)
        if len(self.adjacency) != k or any(len(r) != k for r in self.adjacency):
            raise ValueError(f"adjacency must be {k}x{k}")
        if len(self.initial) != k:
            raise ValueError(f"initial vector must have length {k}")
        if any(x < 0 for r in self.adjacency for x in r) or any(x < 0 for x in self.initial):
            raise ValueError("Bratteli data must be nonnegative")
        if self.horizon < 0:
            raise ValueError("horizon must be nonnegative")
        dims = [tuple(self.initial)]
        for _ in range(self.horizon):
            dims.append(matvec(self.adjacency, dims[-1]))
        object.__setattr__(self, "_dims", tuple(dims))

    @classmethod
    def from_matrix(cls, adjacency, initial, horizon: int = 6, vertices=None) -> "BratteliDiagram":
        adjacency = as_matrix(adjacency)
        vertices = tuple(vertices) if vertices else tuple(str(i) for i in range(len(adjacency)))
        return cls(vertices, adjacency, tuple(int(x) for x in initial), horizon)

    @property
    def dims(self) -> tuple[Vector, ...]:
        return self._dims

    def dim(self, n: int) -> Vector:
        if n <= self.horizon:
            return self._dims[n]
        return matvec(matpow(self.adjacency, n - self.horizon), self._dims[-1])

    @property
    def algebra_dims(self) -> tuple[int, ...]:
        return tuple(sum(x * x for x in d) for d in self._dims)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "adjacency": [list(r) for r in self.adjacency],
            "dims": [list(d) for d in self._dims],
            "algebra_dims": list(self.algebra_dims),
        }


def diagram_for_A(action: BimoduleAction, horizon: int) -> BratteliDiagram:
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    k = action.module.rank
    return BratteliDiagram(action.objects, action.right_matrix(), basis(k, action.m0), horizon)


def diagram_for_BY(dual_ring: FusionRing, Y: Sequence[int], horizon: int) -> BratteliDiagram:
    if not any(Y):
        raise ValueError("Y must be nonzero")
    M = fusion_matrix(dual_ring, Y, "left")
    return BratteliDiagram(dual_ring.labels, M, basis(dual_ring.rank, dual_ring.unit), horizon)


def telescope(diagram: BratteliDiagram, step: int) -> BratteliDiagram:
    if step < 1:
        raise ValueError("telescoping step must be at least 1")
    if step == 1:
        return diagram
    return BratteliDiagram(
        diagram.vertices, matpow(diagram.adjacency, step), diagram.initial, diagram.horizon
    )


@dataclass(frozen=True)
class SimplicityVerdict:
    """Decision for the limit algebra of a stationary diagram.

    Simple verdicts carry either ``exponent`` (the restricted adjacency has an
    entrywise positive power) or ``period``/``classes``/``phase`` (the support
    automaton visits one cyclic phase). NotSimple verdicts carry ``witness``, a
    set of ``(vertex, level mod witness_period)`` pairs that is directed and
    hereditary and cuts out a proper nonzero ideal.
    """

    simple: bool
    certificate: str
    support: tuple[int, ...] = ()
    exponent: int | None = None
    period: int | None = None
    classes: tuple[tuple[int, int], ...] = ()
    phase: int | None = None
    witness: frozenset = frozenset()
    witness_period: int = 1
    reason: str = ""

    @property
    def witness_vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for v, _ in self.witness}))


def _live_vertices(succ, comps) -> set[int]:
    pred: list[list[int]] = [[] for _ in succ]
    for v, ws in enumerate(succ):
        for w in ws:
            pred[w].append(v)
    cyclic = [v for c in comps if graphs.is_nontrivial(succ, c) for v in c]
    return graphs.reachable(pred, cyclic)


def _saturate(states, succ_of, seed: set) -> set:
    """Hereditary closure: add every state all of whose successors already lie in the set."""
    W = set(seed)
    changed = True
    while changed:
        changed = False
        for s in states:
            if s in W:
                continue
            nxt = succ_of(s)
            if nxt and all(t in W for t in nxt):
                W.add(s)
                changed = True
    return W


def decide_simplicity(diagram: BratteliDiagram) -> SimplicityVerdict:
    A = diagram.adjacency
    k = len(A)
    start = [v for v in range(k) if diagram.initial[v] > 0]
    if not start:
        raise ValueError("initial dimension vector is zero")
    succ = successors(A)
    comps = graphs.strongly_connected_components(succ)
    live = _live_vertices(succ, comps)
    seen = graphs.reachable(succ, start)
    present = seen & live
    if not present:
        raise ValueError("every block dies out; the limit algebra is zero")
    cyclic = [c for c in comps if graphs.is_nontrivial(succ, c) and c[0] in seen]
    live_succ = [[w for w in succ[v] if w in live] for v in range(k)]

    if len(cyclic) > 1:
        downstream = {i: graphs.reachable(succ, cyclic[i]) for i in range(len(cyclic))}
        sink = next(
            i
            for i in range(len(cyclic))
            if not any(j != i and cyclic[j][0] in downstream[i] for j in range(len(cyclic)))
        )
        closure = downstream[sink] & live
        W = _saturate(sorted(present), lambda v: live_succ[v], closure)
        return SimplicityVerdict(
            simple=False,
            certificate="ideal",
            witness=frozenset((v, 0) for v in W),
            witness_period=1,
            reason=(
                f"{len(cyclic)} strongly connected components carry cycles; the one through "
                f"{diagram.vertices[cyclic[sink][0]]} generates a proper ideal"
            ),
        )

    K = cyclic[0]
    h, cls = graphs.period_and_classes(succ, K)
    members = set(K)
    reached = set((v, 0) for v in start)
    queue = deque(reached)
    while queue:
        v, r = queue.popleft()
        for w in succ[v]:
            s = (w, (r + 1) % h)
            if s not in reached:
                reached.add(s)
                queue.append(s)
    phases = sorted({(cls[w] - r) % h for w, r in reached if w in members})
    classes = tuple(sorted(cls.items()))

    if len(phases) == 1:
        if h == 1:
            block = submatrix(A, K, K)
            power = block
            p = 1
            while not is_positive(power):
                p += 1
                if p > wielandt_bound(len(K)):
                    raise AssertionError("aperiodic irreducible block failed the primitivity bound")
                power = matmul(power, block)
            return SimplicityVerdict(
                simple=True,
                certificate="positive-power",
                support=tuple(K),
                exponent=p,
                period=1,
                classes=classes,
                phase=phases[0],
                reason=f"adjacency on the eventual support has an entrywise positive power {p}",
            )
        return SimplicityVerdict(
            simple=True,
            certificate="support-automaton",
            support=tuple(K),
            period=h,
            classes=classes,
            phase=phases[0],
            reason=(
                f"eventual support is one cyclic class of a period-{h} component at every level"
            ),
        )

    phi = phases[0]
    states = [(v, r) for v in sorted(present) for r in range(h)]
    seed = {(w, r) for w in K for r in range(h) if (cls[w] - r) % h == phi}
    W = _saturate(states, lambda s: [(w, (s[1] + 1) % h) for w in live_succ[s[0]]], seed)
    return SimplicityVerdict(
        simple=False,
        certificate="ideal",
        support=tuple(K),
        period=h,
        classes=classes,
        witness=frozenset(W),
        witness_period=h,
        reason=f"blocks of a period-{h} component occur in {len(phases)} distinct phases",
    )


@dataclass(frozen=True)
class TraceData:
    pf: FPEnclosure
    weights: tuple[float, ...]
    support: tuple[int, ...]


def trace_data(diagram: BratteliDiagram, tolerance: float | Fraction = 1e-10) -> TraceData:
    """PF growth rate and trace weights (left PF vector, summing to 1) of a simple limit."""
    verdict = decide_simplicity(diagram)
    if not verdict.simple or verdict.certificate != "positive-power":
        raise UnsupportedCase("trace data needs a simple diagram with a positive-power certificate")
    K = verdict.support
    block = transpose(submatrix(diagram.adjacency, K, K))
    enc = fp_dimension(block, tolerance)
    weights = [0.0] * len(diagram.vertices)
    for i, v in enumerate(K):
        weights[v] = enc.vector[i]
    return TraceData(enc, tuple(weights), K)
