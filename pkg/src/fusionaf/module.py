"""Decategorified module and bimodule categories over fusion rings.

Conventions: ``L[a][m'][m]`` is the multiplicity of ``m'`` in ``a |> m`` and
``R[e][m'][m]`` the multiplicity of ``m'`` in ``m <| e``. Both act on column
vectors indexed by module simples, and the right action composes
contravariantly: ``R[e] R[f] = R[f (x) e]``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import Sequence

from . import graphs
from .fusion import FusionRing, StructureError, Violation, tensor_power_decomposition
from .intmat import (
    Matrix,
    Vector,
    basis,
    identity,
    linear_combination,
    matmul,
    matpow,
    matvec,
)


@dataclass(frozen=True)
class ModuleData:
    objects: tuple[str, ...]
    L: tuple[Matrix, ...]

    @property
    def rank(self) -> int:
        return len(self.objects)

    def action_matrix(self, X: Sequence[int]) -> Matrix:
        k = self.rank
        return linear_combination(X, self.L, k, k)


@dataclass(frozen=True)
class BimoduleAction:
    ring: FusionRing
    module: ModuleData
    dual_ring: FusionRing
    R: tuple[Matrix, ...]
    m0: int = 0
    Y: Vector | None = None

    def __post_init__(self):
        _check_structure(self)

    def with_Y(self, Y: Sequence[int]) -> "BimoduleAction":
        return replace(self, Y=tuple(int(y) for y in Y))

    @property
    def objects(self) -> tuple[str, ...]:
        return self.module.objects

    def right_matrix(self, Z: Sequence[int] | None = None) -> Matrix:
        """``R_Z = sum_e Z_e R_e``; defaults to ``Z = Y``."""
        Z = self.Y if Z is None else Z
        if Z is None:
            raise ValueError("the action carries no object Y")
        k = self.module.rank
        return linear_combination(Z, self.R, k, k)

    def tower_vector(self, n: int) -> Vector:
        """Multiplicities of the simples of ``m0 <| Y^n``."""
        return matvec(matpow(self.right_matrix(), n), basis(self.module.rank, self.m0))

    def relabeled(self, ring_perm, module_perm, dual_perm) -> "BimoduleAction":
        def move(mats, src_perm):
            out: list[Matrix] = [()] * len(mats)
            for i, M in enumerate(mats):
                out[src_perm[i]] = _permute_square(M, module_perm)
            return tuple(out)

        objects = [""] * self.module.rank
        for i, p in enumerate(module_perm):
            objects[p] = self.module.objects[i]
        Y = None
        if self.Y is not None:
            y = [0] * len(self.Y)
            for i, p in enumerate(dual_perm):
                y[p] = self.Y[i]
            Y = tuple(y)
        return BimoduleAction(
            ring=self.ring.relabeled(ring_perm),
            module=ModuleData(tuple(objects), move(self.module.L, ring_perm)),
            dual_ring=self.dual_ring.relabeled(dual_perm),
            R=move(self.R, dual_perm),
            m0=module_perm[self.m0],
            Y=Y,
        )


def _permute_square(M: Matrix, perm: Sequence[int]) -> Matrix:
    k = len(perm)
    out = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            out[perm[i]][perm[j]] = M[i][j]
    return tuple(tuple(r) for r in out)


def _check_structure(action: BimoduleAction) -> None:
    k = action.module.rank
    if k == 0:
        raise StructureError("module category has no simple objects")
    if len(set(action.module.objects)) != k:
        raise StructureError("duplicate module object label")
    if len(action.module.L) != action.ring.rank:
        raise StructureError(
            f"{len(action.module.L)} left action matrices for {action.ring.rank} simples"
        )
    if len(action.R) != action.dual_ring.rank:
        raise StructureError(
            f"{len(action.R)} right action matrices for {action.dual_ring.rank} dual simples"
        )
    for side, mats, labels in (
        ("left", action.module.L, action.ring.labels),
        ("right", action.R, action.dual_ring.labels),
    ):
        for label, M in zip(labels, mats):
            if len(M) != k or any(len(row) != k for row in M):
                raise StructureError(f"{side} action matrix of {label} is not {k}x{k}")
    if not 0 <= action.m0 < k:
        raise StructureError(f"generating object index {action.m0} out of range")
    if action.Y is not None:
        if len(action.Y) != action.dual_ring.rank:
            raise StructureError(
                f"Y has {len(action.Y)} coefficients, dual ring has {action.dual_ring.rank} simples"
            )
        if any(y < 0 for y in action.Y):
            raise StructureError("Y multiplicities must be nonnegative")


def _composition_violations(
    mats: Sequence[Matrix],
    ring: FusionRing,
    objects: Sequence[str],
    law: str,
    reverse: bool,
) -> list[Violation]:
    out = []
    k = len(objects)
    for a, b in product(range(ring.rank), repeat=2):
        lhs = matmul(mats[a], mats[b])
        # right action: R_a R_b = R_{b (x) a}
        x, y = (b, a) if reverse else (a, b)
        coeffs = [ring.N(x, y, c) for c in range(ring.rank)]
        rhs = linear_combination(coeffs, mats, k, k)
        if lhs != rhs:
            i, j = next((i, j) for i in range(k) for j in range(k) if lhs[i][j] != rhs[i][j])
            out.append(
                Violation(
                    law,
                    (ring.labels[a], ring.labels[b]),
                    f"entry ({objects[i]},{objects[j]}): {lhs[i][j]} != {rhs[i][j]}",
                )
            )
    return out


def generated_objects(module: ModuleData, m0: int) -> set[int]:
    total = linear_combination([1] * len(module.L), module.L, module.rank, module.rank)
    succ = [[i for i in range(module.rank) if total[i][j] > 0] for j in range(module.rank)]
    return graphs.reachable(succ, [m0])


def verify_action(action: BimoduleAction) -> list[Violation]:
    """Every failed bimodule law; empty iff the action is consistent."""
    ring, dual, module = action.ring, action.dual_ring, action.module
    k = module.rank
    objs = module.objects
    out: list[Violation] = []
    I = identity(k)
    for side, mats, labels in (("left", module.L, ring.labels), ("right", action.R, dual.labels)):
        for label, M in zip(labels, mats):
            if any(x < 0 for row in M for x in row):
                out.append(Violation("nonnegativity", (side, label)))
    if module.L[ring.unit] != I:
        out.append(Violation("unit law (left)", (ring.labels[ring.unit],), "L_1 is not the identity"))
    if action.R[dual.unit] != I:
        out.append(Violation("unit law (right)", (dual.labels[dual.unit],), "R_1 is not the identity"))
    out += _composition_violations(module.L, ring, objs, "L_a L_b = sum_c N_ab^c L_c", reverse=False)
    out += _composition_violations(action.R, dual, objs, "R_e R_f = sum_g N_fe^g R_g", reverse=True)
    for a, e in product(range(ring.rank), range(dual.rank)):
        if matmul(module.L[a], action.R[e]) != matmul(action.R[e], module.L[a]):
            out.append(Violation("bimodule compatibility", (ring.labels[a], dual.labels[e])))
    reached = generated_objects(module, action.m0)
    if len(reached) != k:
        missing = [objs[i] for i in range(k) if i not in reached]
        out.append(
            Violation("generating object", (objs[action.m0],), f"does not reach {', '.join(missing)}")
        )
    return out


def regular_module(ring: FusionRing, Y: Sequence[int] | None = None) -> BimoduleAction:
    """``C`` acting on itself; the dual ring is ``C`` with reversed multiplication.

    Under that identification the dual simple ``e`` acts on the right as
    tensoring with the dual of ``e``.
    """
    k = ring.rank
    L = []
    R = []
    for a in range(k):
        L.append(tuple(tuple(ring.N(a, b, c) for b in range(k)) for c in range(k)))
        ebar = ring.dual[a]
        R.append(tuple(tuple(ring.N(b, ebar, c) for b in range(k)) for c in range(k)))
    return BimoduleAction(
        ring=ring,
        module=ModuleData(ring.labels, tuple(L)),
        dual_ring=ring.reversed(),
        R=tuple(R),
        m0=ring.unit,
        Y=None if Y is None else tuple(Y),
    )


@dataclass(frozen=True)
class Indecomposability:
    connected: bool
    partition: tuple[tuple[int, ...], ...]

    def __bool__(self) -> bool:
        return self.connected


def indecomposable(module: ModuleData) -> Indecomposability:
    k = module.rank
    edges = [(m, mp) for M in module.L for mp in range(k) for m in range(k) if M[mp][m] > 0]
    parts = graphs.undirected_components(k, edges)
    return Indecomposability(len(parts) == 1, tuple(tuple(p) for p in parts))


def hom_dimension(action: BimoduleAction, X: Sequence[int], n: int) -> int:
    """``dim Hom(m0 <| Y^n, X |> m0 <| Y^n)``."""
    if len(X) != action.ring.rank:
        raise StructureError(f"X has {len(X)} coefficients, ring has {action.ring.rank} simples")
    if n < 0:
        raise ValueError("level must be nonnegative")
    u = action.tower_vector(n)
    LX = action.module.action_matrix(X)
    return sum(ui * v for ui, v in zip(u, matvec(LX, u)))


def power_decomposition_defect(action: BimoduleAction, m: int) -> list[tuple[int, int, int, int]]:
    """Entries where ``R_Y^m`` and ``sum_s c_s(m) R_s`` disagree, as (row, col, lhs, rhs)."""
    k = action.module.rank
    lhs = matpow(action.right_matrix(), m)
    c = tensor_power_decomposition(action.dual_ring, action.Y, m)
    rhs = linear_combination(c, action.R, k, k)
    return [(i, j, lhs[i][j], rhs[i][j]) for i in range(k) for j in range(k) if lhs[i][j] != rhs[i][j]]

