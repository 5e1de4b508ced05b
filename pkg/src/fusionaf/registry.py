"""Built-in fusion rings and actions.

The tables are the standard fusion rules; each one is checked against
``verify_ring`` in the test suite rather than trusted.
"""

from __future__ import annotations

from typing import Callable

from .document import ActionDocument, document_from_action
from .fusion import FusionRing, StructureError
from .module import BimoduleAction, ModuleData, regular_module


def trivial_ring() -> FusionRing:
    return FusionRing.from_table(["1"], "1", ["1"], [("1", "1", "1", 1)])


def _cyclic_labels(n: int, gen: str) -> list[str]:
    return ["1", gen] + [f"{gen}^{i}" for i in range(2, n)]


def cyclic_ring(n: int, gen: str = "g") -> FusionRing:
    """Group ring of Z/n with simples 1, g, g^2, ..."""
    labels = _cyclic_labels(n, gen)
    dual = [labels[(-i) % n] for i in range(n)]
    table = [(labels[a], labels[b], labels[(a + b) % n], 1) for a in range(n) for b in range(n)]
    return FusionRing.from_table(labels, "1", dual, table)


def fibonacci_ring() -> FusionRing:
    return FusionRing.from_table(
        ["1", "tau"],
        "1",
        ["1", "tau"],
        [
            ("1", "1", "1", 1),
            ("1", "tau", "tau", 1),
            ("tau", "1", "tau", 1),
            ("tau", "tau", "1", 1),
            ("tau", "tau", "tau", 1),
        ],
    )


def ising_ring() -> FusionRing:
    rules = {
        ("1", "1"): ["1"],
        ("1", "sigma"): ["sigma"],
        ("1", "psi"): ["psi"],
        ("sigma", "1"): ["sigma"],
        ("sigma", "sigma"): ["1", "psi"],
        ("sigma", "psi"): ["sigma"],
        ("psi", "1"): ["psi"],
        ("psi", "sigma"): ["sigma"],
        ("psi", "psi"): ["1"],
    }
    table = [(a, b, c, 1) for (a, b), cs in rules.items() for c in cs]
    return FusionRing.from_table(["1", "sigma", "psi"], "1", ["1", "sigma", "psi"], table)


RINGS: dict[str, Callable[[], FusionRing]] = {
    "trivial": trivial_ring,
    **{f"z{n}": (lambda n=n: cyclic_ring(n)) for n in range(2, 6)},
    "fibonacci": fibonacci_ring,
    "ising": ising_ring,
}


def ring_by_name(name: str) -> FusionRing:
    try:
        return RINGS[name]()
    except KeyError:
        raise StructureError(f"unknown registry ring {name!r}") from None


def fiber_module(n: int) -> BimoduleAction:
    """Z/n acting trivially on Vec; the dual ring is the character ring of Z/n."""
    ring = cyclic_ring(n)
    dual = cyclic_ring(n, "chi")
    one = ((1,),)
    return BimoduleAction(ring, ModuleData(("pt",), (one,) * n), dual, (one,) * n, 0)


def _regular(ring_name: str, **Y: int) -> Callable[[], BimoduleAction]:
    def build():
        action = regular_module(ring_by_name(ring_name))
        return action.with_Y(action.dual_ring.object(Y))

    return build


def _fiber(n: int, **Y: int) -> Callable[[], BimoduleAction]:
    def build():
        action = fiber_module(n)
        return action.with_Y(action.dual_ring.object(Y))

    return build


ACTIONS: dict[str, tuple[str, Callable[[], BimoduleAction]]] = {
    "trivial_regular": ("trivial ring on itself, Y = 1", _regular("trivial", **{"1": 1})),
    "fib_regular": ("Fibonacci ring on itself, Y = tau", _regular("fibonacci", tau=1)),
    "ising_regular_sigma": ("Ising ring on itself, Y = sigma", _regular("ising", sigma=1)),
    "ising_regular_1sigma": ("Ising ring on itself, Y = 1 + sigma", _regular("ising", **{"1": 1, "sigma": 1})),
    "z2_fiber_chi": ("Z/2 on Vec (dual ring Rep(Z/2)), Y = chi", _fiber(2, chi=1)),
    "z2_fiber_1chi": ("Z/2 on Vec (dual ring Rep(Z/2)), Y = 1 + chi", _fiber(2, **{"1": 1, "chi": 1})),
    "z3_fiber_1chi": ("Z/3 on Vec (dual ring Rep(Z/3)), Y = 1 + chi", _fiber(3, **{"1": 1, "chi": 1})),
}
for _n in range(2, 6):
    ACTIONS[f"z{_n}_regular_g"] = (f"Z/{_n} on itself, Y = g", _regular(f"z{_n}", g=1))
    ACTIONS[f"z{_n}_regular_1g"] = (f"Z/{_n} on itself, Y = 1 + g", _regular(f"z{_n}", **{"1": 1, "g": 1}))


def action_by_name(name: str) -> BimoduleAction:
    try:
        return ACTIONS[name][1]()
    except KeyError:
        raise StructureError(f"unknown registry example {name!r}") from None


def registry_document(name: str) -> ActionDocument:
    return document_from_action(action_by_name(name), name=name, source="registry")
