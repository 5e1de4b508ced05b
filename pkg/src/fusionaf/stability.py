"""Z-stability verdicts for stationary AF-actions.

The pipeline only ever certifies: when the strong tensor generator criterion
holds the action is reported equivariantly Z-stable, otherwise the report is
Inconclusive. There is no negative verdict because the criterion is only
sufficient.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

from .document import canonical_json
from .bratteli import (
    BratteliDiagram,
    SimplicityVerdict,
    UnsupportedCase,
    decide_simplicity,
    default_horizon,
    diagram_for_A,
    diagram_for_BY,
    trace_data,
)
from .fusion import GeneratorResult, fusion_matrix, strong_generator, verify_ring
from .intmat import Matrix, matpow
from .module import BimoduleAction, indecomposable, verify_action
from .multimatrix import MultiMatrixShape, central_capacity, embedding_feasible

Z_STABLE = "EquivariantlyZStable"
INCONCLUSIVE = "Inconclusive"

NOT_AF_EMBEDDABLE = "D is not AF-embeddable (no unital copy inside an AF algebra)"


def digest(obj: Any) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _frac(x: Fraction) -> dict:
    return {"exact": f"{x.numerator}/{x.denominator}", "approx": float(round(x, 14))}


@dataclass(frozen=True)
class Options:
    max_m: int = 4
    tolerance: float = 1e-10


@dataclass(frozen=True)
class DNote:
    name: str
    certified: bool
    reason: str
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "certified": self.certified,
            "reason": self.reason,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class StabilityReport:
    name: str
    digest_input: dict
    horizon: int
    ring_violations: tuple[str, ...]
    dual_violations: tuple[str, ...]
    action_violations: tuple[str, ...]
    warnings: tuple[str, ...]
    indecomposable: bool | None
    partition: tuple[tuple[int, ...], ...]
    generator: GeneratorResult | None
    by_diagram: BratteliDiagram | None
    by_simplicity: SimplicityVerdict | None
    a_diagram: BratteliDiagram | None
    a_simplicity: SimplicityVerdict | None
    trace: dict
    capacity: tuple[dict, ...]
    verdict: str
    certificate: dict
    reason: str
    justification: str
    notes: tuple[DNote, ...] = ()

    @property
    def valid(self) -> bool:
        return not (self.ring_violations or self.dual_violations or self.action_violations)

    @property
    def z_stable(self) -> bool:
        return self.verdict == Z_STABLE

    def to_dict(self) -> dict:
        g = self.generator
        return {
            "input": self.digest_input,
            "horizon": self.horizon,
            "validation": {
                "ring": list(self.ring_violations),
                "dual_ring": list(self.dual_violations),
                "action": list(self.action_violations),
                "warnings": list(self.warnings),
            },
            "indecomposable": {
                "connected": self.indecomposable,
                "partition": [list(p) for p in self.partition],
            },
            "strong_generator": None
            if g is None
            else {
                "n": g.n,
                "bound": g.bound,
                "irreducible": g.irreducible,
                "period": g.period,
                "classes": None if g.classes is None else list(g.classes),
                "unreachable": g.unreachable,
                "note": g.note,
            },
            "by_diagram": _diagram_dict(self.by_diagram, self.by_simplicity),
            "a_diagram": _diagram_dict(self.a_diagram, self.a_simplicity),
            "trace": self.trace,
            "central_capacity": list(self.capacity),
            "verdict": {
                "kind": self.verdict,
                "certificate": self.certificate,
                "reason": self.reason,
                "justification": self.justification,
            },
            "d_stability": [n.to_dict() for n in self.notes],
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def to_markdown(self) -> str:
        return render_markdown(self)


def _simplicity_dict(v: SimplicityVerdict | None) -> dict | None:
    if v is None:
        return None
    return {
        "simple": v.simple,
        "certificate": v.certificate,
        "support": list(v.support),
        "exponent": v.exponent,
        "period": v.period,
        "phase": v.phase,
        "witness": sorted([list(s) for s in v.witness]),
        "witness_period": v.witness_period,
        "reason": v.reason,
    }


def _diagram_dict(d: BratteliDiagram | None, v: SimplicityVerdict | None) -> dict | None:
    if d is None:
        return None
    out = d.to_dict()
    out["simplicity"] = _simplicity_dict(v)
    return out


def _input_digest(action: BimoduleAction, name: str) -> dict:
    return {
        "name": name,
        "ring": list(action.ring.labels),
        "dual_ring": list(action.dual_ring.labels),
        "module": list(action.objects),
        "m0": action.objects[action.m0],
        "Y": {action.dual_ring.labels[i]: y for i, y in enumerate(action.Y or ()) if y},
    }


def _justification(gen: GeneratorResult, by: SimplicityVerdict) -> str:
    return (
        f"Y is a strong tensor generator of the dual category: every dual simple is a summand "
        f"of Y^{gen.n}. The Bratteli diagram of B^Y therefore has adjacency with an entrywise "
        f"positive power (p = {by.exponent}), so B^Y is a simple AF algebra and hence Z-stable. "
        f"For every m the algebra End(Y^m) acts on m0 <| Y^n from the right, commuting with all "
        f"G_n(X); this places B^Y unitally inside the G-fixed central sequence algebra of A, and "
        f"a unital copy of Z there is equivalent to equivariant Z-stability of the action."
    )


def _inconclusive(reason: str) -> str:
    return (
        f"The sufficient criterion does not apply: {reason}. This is not evidence against "
        f"Z-stability; the tool makes no claim either way."
    )


def analyze(
    action: BimoduleAction,
    horizon: int | None = None,
    options: Options | None = None,
    name: str = "",
) -> StabilityReport:
    options = options or Options()
    if action.Y is None:
        raise ValueError("the action carries no object Y")
    k = max(action.module.rank, action.dual_ring.rank)
    horizon = default_horizon(k) if horizon is None else horizon
    if horizon < 1:
        raise ValueError("horizon must be at least 1")

    ring_v = tuple(str(v) for v in verify_ring(action.ring))
    dual_v = tuple(str(v) for v in verify_ring(action.dual_ring))
    action_v = tuple(str(v) for v in verify_action(action))
    warnings = []
    if any(v.startswith("generating object") for v in action_v):
        warnings.append(f"m0 = {action.objects[action.m0]} is not generating; the diagram shrinks")
    ind = indecomposable(action.module)
    base = dict(
        name=name,
        digest_input=_input_digest(action, name),
        horizon=horizon,
        ring_violations=ring_v,
        dual_violations=dual_v,
        action_violations=action_v,
        indecomposable=ind.connected,
        partition=ind.partition,
    )

    empty = dict(
        generator=None,
        by_diagram=None,
        by_simplicity=None,
        a_diagram=None,
        a_simplicity=None,
        trace={},
        capacity=(),
        certificate={},
    )
    if ring_v or dual_v or action_v:
        count = len(ring_v) + len(dual_v) + len(action_v)
        reason = f"input fails validation ({count} violation{'s' if count != 1 else ''})"
        return StabilityReport(
            **base, **empty, warnings=tuple(warnings), verdict=INCONCLUSIVE, reason=reason,
            justification=_inconclusive(reason),
        )
    if not any(action.Y):
        reason = "Y is the zero object"
        return StabilityReport(
            **base, **empty, warnings=tuple(warnings), verdict=INCONCLUSIVE, reason=reason,
            justification=_inconclusive(reason),
        )

    gen = strong_generator(action.dual_ring, action.Y)
    by_diag = diagram_for_BY(action.dual_ring, action.Y, horizon)
    a_diag = diagram_for_A(action, horizon)
    by_simple = decide_simplicity(by_diag)
    a_simple = decide_simplicity(a_diag)

    trace: dict = {}
    for key, diag in (("by", by_diag), ("a", a_diag)):
        try:
            td = trace_data(diag, options.tolerance)
        except UnsupportedCase as exc:
            trace[key] = {"unsupported": str(exc)}
            continue
        trace[key] = {
            "pf_lower": _frac(td.pf.lower),
            "pf_upper": _frac(td.pf.upper),
            "weights": [round(w, 12) for w in td.weights],
        }

    capacity = []
    for m in range(options.max_m + 1):
        entry: dict = {"m": m, "n": None, "method": None, "digest": None}
        for n in range(0, horizon - m + 1):
            wit = central_capacity(action, m, n, horizon)
            if wit is not None:
                entry = {
                    "m": m,
                    "n": n,
                    "method": wit.method,
                    "digest": digest([list(r) for r in wit.assignment]),
                }
                break
        capacity.append(entry)

    if not ind.connected:
        warnings.append("module category is decomposable")
        verdict, reason = INCONCLUSIVE, "the module category is decomposable"
    elif not gen.found:
        verdict = INCONCLUSIVE
        if gen.period:
            reason = f"Y is not a strong tensor generator (period-{gen.period} certificate)"
        else:
            reason = "Y is not a strong tensor generator (reducible fusion matrix)"
    elif not (by_simple.simple and by_simple.certificate == "positive-power"):
        verdict, reason = INCONCLUSIVE, "B^Y has no positive-power simplicity certificate"
    else:
        verdict, reason = Z_STABLE, "strong tensor generator criterion holds"

    certificate: dict = {}
    if verdict == Z_STABLE:
        N = fusion_matrix(action.dual_ring, action.Y)
        certificate = {
            "strong_generator_n": gen.n,
            "positivity_exponent": by_simple.exponent,
            "unit": action.dual_ring.unit,
            "fusion_matrix": [list(r) for r in N],
            "matrix_digest": digest([list(r) for r in N]),
        }
        justification = _justification(gen, by_simple)
    else:
        justification = _inconclusive(reason)

    return StabilityReport(
        **base,
        warnings=tuple(warnings),
        generator=gen,
        by_diagram=by_diag,
        by_simplicity=by_simple,
        a_diagram=a_diag,
        a_simplicity=a_simple,
        trace=trace,
        capacity=tuple(capacity),
        verdict=verdict,
        certificate=certificate,
        reason=reason,
        justification=justification,
    )


_UHF = re.compile(r"^(?:M_\{?(\d+)\^\{?(?:inf|infty|∞)\}?\}?|UHF\((\d+)\)|UHF:(\d+))$")


def parse_d(name: str) -> tuple[str, int | None]:
    key = name.strip()
    if key in ("Z", "Jiang-Su"):
        return "Z", None
    if key in ("O_inf", "O_infty", "O_∞", "O_2"):
        return "O", None
    m = _UHF.match(key)
    if m:
        q = int(next(g for g in m.groups() if g))
        if q < 2:
            raise ValueError(f"UHF type needs q >= 2, got {q}")
        return "UHF", q
    raise ValueError(f"unknown strongly self-absorbing algebra {name!r}")


def _uhf_certificate(N: Matrix, c_levels: list[tuple[int, ...]], q: int) -> dict | None:
    horizon = len(c_levels) - 1
    for t in range(1, horizon + 1):
        P = matpow(N, t)
        if all(x % q == 0 for row in P for x in row):
            return {"kind": "matrix", "step": t, "start": 0}
    for t in range(1, horizon + 1):
        for n0 in range(0, horizon - t + 1):
            if c_levels[n0 + t] == tuple(q * x for x in c_levels[n0]):
                return {"kind": "vector", "step": t, "start": n0}
    return None


def d_stability_note(report: StabilityReport, D: str) -> StabilityReport:
    kind, q = parse_d(D)
    if kind == "Z":
        if report.z_stable:
            note = DNote(D, True, "certified by the strong tensor generator criterion", dict(report.certificate))
        else:
            note = DNote(D, False, report.reason)
    elif kind == "O":
        note = DNote(D, False, NOT_AF_EMBEDDABLE)
    elif not report.valid or report.by_diagram is None:
        note = DNote(D, False, report.reason)
    else:
        diag = report.by_diagram
        levels = list(diag.dims)
        cert = _uhf_certificate(diag.adjacency, levels, q)
        if cert is None:
            note = DNote(
                D, False,
                f"no {q}-divisibility pattern in the B^Y tower up to level {diag.horizon}",
            )
        else:
            checks = []
            k = 1
            while True:
                level = cert["start"] + k * cert["step"]
                if level > diag.horizon:
                    break
                shape = MultiMatrixShape.from_sizes([x for x in levels[level] if x])
                wit = embedding_feasible(MultiMatrixShape.from_sizes([q**k]), shape)
                checks.append({"k": k, "level": level, "feasible": wit is not None})
                k += 1
            ok = all(c["feasible"] for c in checks)
            cert = dict(cert, embeddings=checks)
            if ok:
                reason = (
                    f"M_{q}^k embeds unitally in B^Y at level {cert['start']} + k*{cert['step']} for every k; "
                    f"the divisibility pattern repeats with period {cert['step']}"
                )
            else:
                reason = "divisibility pattern found but an embedding check failed"
            note = DNote(D, ok, reason, cert)
    return replace(report, notes=report.notes + (note,))


def render_markdown(r: StabilityReport) -> str:
    lines = [f"# Stability report: {r.name or 'action'}", ""]
    inp = r.digest_input
    lines += [
        "## Input",
        "",
        f"- ring simples: {', '.join(inp['ring'])}",
        f"- dual ring simples: {', '.join(inp['dual_ring'])}",
        f"- module objects: {', '.join(inp['module'])}",
        f"- generating object m0: {inp['m0']}",
        "- Y: " + (" + ".join(f"{m}*{s}" if m != 1 else s for s, m in inp["Y"].items()) or "0"),
        f"- horizon: {r.horizon}",
        "",
        "## Validation",
        "",
    ]
    for title, items in (("ring", r.ring_violations), ("dual ring", r.dual_violations), ("action", r.action_violations)):
        lines.append(f"- {title}: " + ("ok" if not items else f"{len(items)} violation(s)"))
        lines += [f"  - {v}" for v in items]
    for w in r.warnings:
        lines.append(f"- warning: {w}")
    lines.append(
        f"- indecomposable: {'yes' if r.indecomposable else 'no'}"
        + ("" if r.indecomposable else f" (partition {[list(p) for p in r.partition]})")
    )
    lines.append("")
    g = r.generator
    if g is not None:
        lines += ["## Strong tensor generator", ""]
        if g.found:
            lines.append(f"- strong tensor generator: n = {g.n} (search bound {g.bound})")
        elif g.period:
            lines.append(f"- strong tensor generator: none (period-{g.period} certificate, classes {list(g.classes)})")
        else:
            lines.append(f"- strong tensor generator: none (reducible; witness simple index {g.unreachable})")
        lines.append(f"- {g.note}")
        lines.append("")
    for title, d, v in (("B^Y tower", r.by_diagram, r.by_simplicity), ("A tower", r.a_diagram, r.a_simplicity)):
        if d is None:
            continue
        lines += [f"## {title}", ""]
        lines.append(f"- adjacency: {[list(row) for row in d.adjacency]}")
        lines.append(f"- algebra dimensions: {', '.join(str(x) for x in d.algebra_dims)}")
        if v.simple:
            extra = f"p = {v.exponent}" if v.certificate == "positive-power" else f"period {v.period}, phase {v.phase}"
            lines.append(f"- simple: yes ({v.certificate}, {extra})")
        else:
            lines.append(f"- simple: no (ideal witness {sorted(v.witness)}, period {v.witness_period})")
        lines.append("")
    if r.trace:
        lines += ["## Perron-Frobenius data", ""]
        for key, t in r.trace.items():
            label = "B^Y" if key == "by" else "A"
            if "unsupported" in t:
                lines.append(f"- {label}: {t['unsupported']}")
            else:
                lines.append(
                    f"- {label}: growth rate in [{t['pf_lower']['approx']:.12f}, {t['pf_upper']['approx']:.12f}], "
                    f"trace weights {t['weights']}"
                )
        lines.append("")
    if r.capacity:
        lines += ["## Central capacity", "", "| m | least n | method | witness digest |", "|---|---|---|---|"]
        for c in r.capacity:
            lines.append(f"| {c['m']} | {c['n']} | {c['method']} | {c['digest']} |")
        lines.append("")
    lines += ["## Verdict", "", f"**{r.verdict}**: {r.reason}", ""]
    if r.certificate:
        lines.append(
            f"- certificate: n = {r.certificate['strong_generator_n']}, p = {r.certificate['positivity_exponent']}, "
            f"matrix digest {r.certificate['matrix_digest']}"
        )
        lines.append("")
    lines += [r.justification, ""]
    if r.notes:
        lines += ["## D-stability", ""]
        for n in r.notes:
            lines.append(f"- {n.name}: {'certified' if n.certified else 'not certified'} ({n.reason})")
        lines.append("")
    return "\n".join(lines)
