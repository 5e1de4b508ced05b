"""Fusion rings: based rings with duality, stored by their structure constants.

``N(a, b, c)`` is the multiplicity of the simple ``c`` in ``a (x) b``. Objects of
the ring are nonnegative integer vectors over the simples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Literal, Mapping, Sequence

from . import graphs
from .intmat import Matrix, Vector, basis, matvec, successors


class StructureError(ValueError):
    """Input is malformed (bad index, wrong length, duplicate label).

    Kept separate from axiom violations, which are reported as data.
    """


@dataclass(frozen=True)
class Violation:
    law: str
    indices: tuple[str, ...]
    detail: str = ""

    def __str__(self) -> str:
        where = ",".join(self.indices)
        text = f"{self.law} fails at ({where})"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass(frozen=True)
class FusionRing:
    labels: tuple[str, ...]
    unit: int
    dual: tuple[int, ...]
    constants: tuple[tuple[int, int, int, int], ...]
    _table: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        k = len(self.labels)
        if k == 0:
            raise StructureError("a fusion ring needs at least one simple")
        if len(set(self.labels)) != k:
            dupes = sorted({x for x in self.labels if self.labels.count(x) > 1})
            raise StructureError(f"duplicate label(s): {', '.join(dupes)}")
        if not 0 <= self.unit < k:
            raise StructureError(f"unit index {self.unit} out of range")
        if len(self.dual) != k:
            raise StructureError(f"dual has length {len(self.dual)}, expected {k}")
        for i, d in enumerate(self.dual):
            if not 0 <= d < k:
                raise StructureError(f"dual of {self.labels[i]} is out of range ({d})")
        table: dict[tuple[int, int, int], int] = {}
        for a, b, c, mult in self.constants:
            for x in (a, b, c):
                if not 0 <= x < k:
                    raise StructureError(f"structure constant index {x} out of range")
            if (a, b, c) in table:
                raise StructureError(
                    f"structure constant ({self.labels[a]},{self.labels[b]},{self.labels[c]}) given twice"
                )
            table[(a, b, c)] = mult
        object.__setattr__(self, "_table", table)

    @classmethod
    def from_table(
        cls,
        labels: Sequence[str],
        unit: str,
        dual: Sequence[str],
        products: Iterable[tuple[str, str, str, int]],
    ) -> "FusionRing":
        """Build from label-based data; zero multiplicities are dropped."""
        labels = tuple(labels)
        pos = {x: i for i, x in enumerate(labels)}
        try:
            constants = tuple(
                sorted((pos[a], pos[b], pos[c], int(m)) for a, b, c, m in products if m != 0)
            )
            return cls(labels, pos[unit], tuple(pos[d] for d in dual), constants)
        except KeyError as exc:
            raise StructureError(f"unknown label {exc.args[0]!r}") from None

    @property
    def rank(self) -> int:
        return len(self.labels)

    def N(self, a: int, b: int, c: int) -> int:
        return self._table.get((a, b, c), 0)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise StructureError(f"unknown simple {label!r}") from None

    def dense(self) -> list[list[list[int]]]:
        k = self.rank
        out = [[[0] * k for _ in range(k)] for _ in range(k)]
        for (a, b, c), m in self._table.items():
            out[a][b][c] = m
        return out

    def with_constant(self, a: int, b: int, c: int, value: int) -> "FusionRing":
        table = dict(self._table)
        table[(a, b, c)] = value
        constants = tuple(sorted((x, y, z, m) for (x, y, z), m in table.items() if m != 0))
        return FusionRing(self.labels, self.unit, self.dual, constants)

    def reversed(self) -> "FusionRing":
        """Same simples and duals, opposite multiplication."""
        constants = tuple(sorted((b, a, c, m) for (a, b, c), m in self._table.items()))
        return FusionRing(self.labels, self.unit, self.dual, constants)

    def relabeled(self, perm: Sequence[int]) -> "FusionRing":
        """Move simple ``i`` to position ``perm[i]``."""
        labels = [""] * self.rank
        dual = [0] * self.rank
        for i, p in enumerate(perm):
            labels[p] = self.labels[i]
            dual[p] = perm[self.dual[i]]
        constants = tuple(sorted((perm[a], perm[b], perm[c], m) for (a, b, c), m in self._table.items()))
        return FusionRing(tuple(labels), perm[self.unit], tuple(dual), constants)

    def object(self, multiplicities: Mapping[str, int]) -> Vector:
        vec = [0] * self.rank
        for label, m in multiplicities.items():
            vec[self.index(label)] = int(m)
        return tuple(vec)

    def dual_object(self, Y: Sequence[int]) -> Vector:
        out = [0] * self.rank
        for a, m in enumerate(Y):
            out[self.dual[a]] += m
        return tuple(out)


def verify_ring(ring: FusionRing) -> list[Violation]:
    """Every failed axiom of a fusion ring, with the simples that witness it."""
    k = ring.rank
    L = ring.labels
    N = ring.dense()
    one = ring.unit
    dual = ring.dual
    out: list[Violation] = []

    for (a, b, c), m in sorted(ring._table.items()):
        if m < 0:
            out.append(Violation("nonnegativity", (L[a], L[b], L[c]), f"N = {m}"))

    if dual[one] != one:
        out.append(Violation("dual of unit", (L[one],), f"dual is {L[dual[one]]}"))
    for a in range(k):
        if dual[dual[a]] != a:
            out.append(Violation("dual involution", (L[a],), f"double dual is {L[dual[dual[a]]]}"))

    for b, c in product(range(k), repeat=2):
        expected = int(b == c)
        if N[one][b][c] != expected:
            out.append(Violation("unit law (left)", (L[b], L[c]), f"N(1,{L[b]};{L[c]}) = {N[one][b][c]}"))
        if N[b][one][c] != expected:
            out.append(Violation("unit law (right)", (L[b], L[c]), f"N({L[b]},1;{L[c]}) = {N[b][one][c]}"))

    for a, b in product(range(k), repeat=2):
        expected = int(b == dual[a])
        if N[a][b][one] != expected:
            out.append(Violation("rigidity", (L[a], L[b]), f"N({L[a]},{L[b]};1) = {N[a][b][one]}"))

    for a, b, c in product(range(k), repeat=3):
        n = N[a][b][c]
        if n != N[dual[a]][c][b] or n != N[c][dual[b]][a]:
            out.append(
                Violation(
                    "Frobenius reciprocity",
                    (L[a], L[b], L[c]),
                    f"{n} vs {N[dual[a]][c][b]} vs {N[c][dual[b]][a]}",
                )
            )

    for a, b, c, d in product(range(k), repeat=4):
        lhs = sum(N[a][b][e] * N[e][c][d] for e in range(k))
        rhs = sum(N[b][c][f] * N[a][f][d] for f in range(k))
        if lhs != rhs:
            out.append(Violation("associativity", (L[a], L[b], L[c], L[d]), f"{lhs} != {rhs}"))
    return out


def _check_object(ring: FusionRing, Y: Sequence[int]) -> None:
    if len(Y) != ring.rank:
        raise StructureError(f"object has {len(Y)} coefficients, ring has {ring.rank} simples")
    if any(y < 0 for y in Y):
        raise StructureError("object multiplicities must be nonnegative")


def fusion_matrix(ring: FusionRing, Y: Sequence[int], side: Literal["left", "right"] = "left") -> Matrix:
    """Matrix of tensoring with ``Y``; column ``b`` is ``Y (x) b`` (left) or ``b (x) Y`` (right)."""
    _check_object(ring, Y)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    k = ring.rank
    out = [[0] * k for _ in range(k)]
    for (a, b, c), m in ring._table.items():
        if side == "left":
            coeff, col = Y[a], b
        else:
            coeff, col = Y[b], a
        if coeff:
            out[c][col] += coeff * m
    return tuple(tuple(r) for r in out)


def tensor_power_decomposition(ring: FusionRing, Y: Sequence[int], m: int) -> Vector:
    if m < 0:
        raise ValueError("tensor power must be nonnegative")
    M = fusion_matrix(ring, Y)
    c = basis(ring.rank, ring.unit)
    for _ in range(m):
        c = matvec(M, c)
    return c


def wielandt_bound(k: int) -> int:
    return (k - 1) ** 2 + 1


@dataclass(frozen=True)
class GeneratorResult:
    """Outcome of the strong tensor generator search.

    ``n`` is the least power containing every simple, or ``None``. On ``None``
    exactly one of two certificates is set: ``period``/``classes`` when the
    fusion matrix is irreducible but periodic, ``unreachable`` when it is
    reducible.
    """

    n: int | None
    bound: int
    irreducible: bool
    period: int | None = None
    classes: tuple[int, ...] | None = None
    unreachable: int | None = None
    note: str = ""

    @property
    def found(self) -> bool:
        return self.n is not None


def strong_generator(ring: FusionRing, Y: Sequence[int]) -> GeneratorResult:
    _check_object(ring, Y)
    if not any(Y):
        raise ValueError("the zero object is not a tensor generator candidate")
    k = ring.rank
    bound = wielandt_bound(k)
    M = fusion_matrix(ring, Y)
    c = basis(k, ring.unit)
    for n in range(1, bound + 1):
        c = matvec(M, c)
        if all(x > 0 for x in c):
            return GeneratorResult(
                n=n,
                bound=bound,
                irreducible=True,
                note=f"every simple is a summand of Y^{n}",
            )

    succ = successors(M)
    comps = graphs.strongly_connected_components(succ)
    if len(comps) == 1:
        period, cls = graphs.period_and_classes(succ, comps[0])
        return GeneratorResult(
            n=None,
            bound=bound,
            irreducible=True,
            period=period,
            classes=tuple(cls[v] for v in range(k)),
            note=(
                f"fusion matrix is irreducible with period {period}; no power up to the "
                f"primitivity bound {bound} contains every simple, so none ever does"
            ),
        )
    reach = graphs.reachable(succ, [ring.unit])
    missing = [v for v in range(k) if v not in reach]
    if missing:
        witness = missing[0]
        note = f"simple {ring.labels[witness]} never occurs in any tensor power of Y"
    else:
        back = graphs.reachable(_reverse(succ), [ring.unit])
        witness = next(v for v in range(k) if v not in back)
        note = f"the unit never occurs in Y^n (x) {ring.labels[witness]}"
    return GeneratorResult(n=None, bound=bound, irreducible=False, unreachable=witness, note=note)


def _reverse(succ: Sequence[Sequence[int]]) -> list[list[int]]:
    pred: list[list[int]] = [[] for _ in succ]
    for v, ws in enumerate(succ):
        for w in ws:
            pred[w].append(v)
    return pred
