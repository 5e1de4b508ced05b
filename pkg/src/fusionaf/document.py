"""JSON action documents: strict parsing with path-tagged errors, canonical emission."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from .fusion import FusionRing, StructureError
from .module import BimoduleAction, ModuleData, regular_module

_LABEL = {"type": "string", "minLength": 1}
_COUNT = {"type": "integer", "minimum": 0}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _COUNT}}
_RING = {
    "type": "object",
    "additionalProperties": False,
    "required": ["labels", "unit", "dual", "tensor"],
    "properties": {
        "labels": {"type": "array", "items": _LABEL, "minItems": 1},
        "unit": _LABEL,
        "dual": {"type": "array", "items": _LABEL},
        "tensor": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["a", "b", "c", "mult"],
                "properties": {"a": _LABEL, "b": _LABEL, "c": _LABEL, "mult": _COUNT},
            },
        },
    },
}
SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["Y"],
    "properties": {
        "name": {"type": "string"},
        "source": {"type": "string"},
        "ring": _RING,
        "module": {
            "type": "object",
            "additionalProperties": False,
            "required": ["objects", "action"],
            "properties": {
                "objects": {"type": "array", "items": _LABEL, "minItems": 1},
                "action": {"type": "object", "additionalProperties": _MATRIX},
            },
        },
        "dual_ring": _RING,
        "dual_action": {"type": "object", "additionalProperties": _MATRIX},
        "m0": _LABEL,
        "Y": {"type": "object", "additionalProperties": _COUNT},
        "regular_of": {"oneOf": [_LABEL, _RING]},
    },
}


@dataclass(frozen=True)
class DocumentIssue:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path or '<root>'}: {self.message}"


class DocumentError(ValueError):
    def __init__(self, issues: list[DocumentIssue]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


@dataclass(frozen=True)
class RingSection:
    labels: tuple[str, ...]
    unit: str
    dual: tuple[str, ...]
    tensor: tuple[tuple[str, str, str, int], ...]

    @classmethod
    def from_json(cls, d: dict) -> "RingSection":
        return cls(
            tuple(d["labels"]),
            d["unit"],
            tuple(d["dual"]),
            tuple((t["a"], t["b"], t["c"], t["mult"]) for t in d["tensor"]),
        )

    @classmethod
    def from_ring(cls, ring: FusionRing) -> "RingSection":
        L = ring.labels
        return cls(
            L,
            L[ring.unit],
            tuple(L[d] for d in ring.dual),
            tuple((L[a], L[b], L[c], m) for a, b, c, m in ring.constants),
        )

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "unit": self.unit,
            "dual": list(self.dual),
            "tensor": [{"a": a, "b": b, "c": c, "mult": m} for a, b, c, m in self.tensor],
        }

    def build(self) -> FusionRing:
        return FusionRing.from_table(self.labels, self.unit, self.dual, self.tensor)


@dataclass(frozen=True)
class ActionDocument:
    Y: dict[str, int]
    name: str | None = None
    source: str | None = None
    ring: RingSection | None = None
    objects: tuple[str, ...] | None = None
    action: dict[str, tuple[tuple[int, ...], ...]] | None = None
    dual_ring: RingSection | None = None
    dual_action: dict[str, tuple[tuple[int, ...], ...]] | None = None
    m0: str | None = None
    regular_of: str | RingSection | None = field(default=None)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"Y": dict(self.Y)}
        if self.name is not None:
            out["name"] = self.name
        if self.source is not None:
            out["source"] = self.source
        if self.ring is not None:
            out["ring"] = self.ring.to_json()
        if self.objects is not None:
            out["module"] = {
                "objects": list(self.objects),
                "action": {k: [list(r) for r in v] for k, v in self.action.items()},
            }
        if self.dual_ring is not None:
            out["dual_ring"] = self.dual_ring.to_json()
        if self.dual_action is not None:
            out["dual_action"] = {k: [list(r) for r in v] for k, v in self.dual_action.items()}
        if self.m0 is not None:
            out["m0"] = self.m0
        if isinstance(self.regular_of, RingSection):
            out["regular_of"] = self.regular_of.to_json()
        elif self.regular_of is not None:
            out["regular_of"] = self.regular_of
        return out

    def to_action(self) -> BimoduleAction:
        """Build the bimodule action; raises StructureError on inconsistent data."""
        if self.regular_of is not None:
            if isinstance(self.regular_of, RingSection):
                ring = self.regular_of.build()
            else:
                from .registry import ring_by_name

                ring = ring_by_name(self.regular_of)
            action = regular_module(ring)
            m0 = action.m0 if self.m0 is None else _index(action.objects, self.m0, "m0")
            y = action.dual_ring.object(self.Y)
            return BimoduleAction(action.ring, action.module, action.dual_ring, action.R, m0, y)
        ring = self.ring.build()
        dual = self.dual_ring.build()
        L = tuple(_matrix(self.action, label) for label in ring.labels)
        R = tuple(_matrix(self.dual_action, label) for label in dual.labels)
        m0 = 0 if self.m0 is None else _index(self.objects, self.m0, "m0")
        return BimoduleAction(ring, ModuleData(self.objects, L), dual, R, m0, dual.object(self.Y))


def _index(labels, label, what) -> int:
    try:
        return labels.index(label)
    except ValueError:
        raise StructureError(f"{what}: unknown label {label!r}") from None


def _matrix(mats, label):
    return tuple(tuple(r) for r in mats[label])


def _format_path(path) -> str:
    out = ""
    for p in path:
        if isinstance(p, int):
            out += f"[{p}]"
        else:
            out += f".{p}" if out else str(p)
    return out


def _check_ring(d: dict, where: str, issues: list[DocumentIssue]) -> set[str]:
    labels = d["labels"]
    seen: set[str] = set()
    for i, x in enumerate(labels):
        if x in seen:
            issues.append(DocumentIssue(f"{where}.labels[{i}]", f"duplicate label {x!r}"))
        seen.add(x)
    if d["unit"] not in seen:
        issues.append(DocumentIssue(f"{where}.unit", f"unknown label {d['unit']!r}"))
    if len(d["dual"]) != len(labels):
        issues.append(DocumentIssue(f"{where}.dual", f"expected {len(labels)} entries, got {len(d['dual'])}"))
    for i, x in enumerate(d["dual"]):
        if x not in seen:
            issues.append(DocumentIssue(f"{where}.dual[{i}]", f"unknown label {x!r}"))
    triples: set[tuple] = set()
    for i, t in enumerate(d["tensor"]):
        for key in ("a", "b", "c"):
            if t[key] not in seen:
                issues.append(DocumentIssue(f"{where}.tensor[{i}].{key}", f"unknown label {t[key]!r}"))
        key = (t["a"], t["b"], t["c"])
        if key in triples:
            issues.append(DocumentIssue(f"{where}.tensor[{i}]", f"triple {key} given twice"))
        triples.add(key)
    return seen


def _check_matrices(mats: dict, labels: set[str], size: int, where: str, issues: list[DocumentIssue]) -> None:
    for label in sorted(labels - set(mats)):
        issues.append(DocumentIssue(where, f"missing matrix for {label!r}"))
    for label, M in mats.items():
        if label not in labels:
            issues.append(DocumentIssue(f"{where}.{label}", f"unknown label {label!r}"))
        if len(M) != size or any(len(r) != size for r in M):
            issues.append(DocumentIssue(f"{where}.{label}", f"matrix must be {size}x{size}"))


def _check_semantics(doc: dict, issues: list[DocumentIssue]) -> None:
    sections = ("ring", "module", "dual_ring", "dual_action")
    if "regular_of" in doc:
        for key in sections:
            if key in doc:
                issues.append(DocumentIssue(key, "not allowed together with regular_of"))
        reg = doc["regular_of"]
        if isinstance(reg, dict):
            dual_labels = _check_ring(reg, "regular_of", issues)
        else:
            from .registry import RINGS

            if reg not in RINGS:
                issues.append(DocumentIssue("regular_of", f"unknown registry ring {reg!r}"))
                return
            dual_labels = set(RINGS[reg]().labels)
        objects = dual_labels
    else:
        for key in sections:
            if key not in doc:
                issues.append(DocumentIssue(key, "required section is missing (or use regular_of)"))
        if issues:
            return
        ring_labels = _check_ring(doc["ring"], "ring", issues)
        dual_labels = _check_ring(doc["dual_ring"], "dual_ring", issues)
        objs = doc["module"]["objects"]
        objects = set()
        for i, x in enumerate(objs):
            if x in objects:
                issues.append(DocumentIssue(f"module.objects[{i}]", f"duplicate label {x!r}"))
            objects.add(x)
        _check_matrices(doc["module"]["action"], ring_labels, len(objs), "module.action", issues)
        _check_matrices(doc["dual_action"], dual_labels, len(objs), "dual_action", issues)
    if "m0" in doc and doc["m0"] not in objects:
        issues.append(DocumentIssue("m0", f"unknown module object {doc['m0']!r}"))
    for label in doc["Y"]:
        if label not in dual_labels:
            issues.append(DocumentIssue(f"Y.{label}", f"unknown dual simple {label!r}"))


def parse(text: str) -> ActionDocument:
    """Parse and validate a document; every problem is reported, not just the first."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError([DocumentIssue(f"line {exc.lineno}, column {exc.colno}", exc.msg)]) from None
    validator = jsonschema.Draft7Validator(SCHEMA)
    issues = [
        DocumentIssue(_format_path(e.absolute_path), e.message)
        for e in sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    ]
    if not issues:
        _check_semantics(doc, issues)
    if issues:
        raise DocumentError(issues)
    reg = doc.get("regular_of")
    return ActionDocument(
        Y=dict(doc["Y"]),
        name=doc.get("name"),
        source=doc.get("source"),
        ring=RingSection.from_json(doc["ring"]) if "ring" in doc else None,
        objects=tuple(doc["module"]["objects"]) if "module" in doc else None,
        action={k: tuple(tuple(r) for r in v) for k, v in doc["module"]["action"].items()} if "module" in doc else None,
        dual_ring=RingSection.from_json(doc["dual_ring"]) if "dual_ring" in doc else None,
        dual_action={k: tuple(tuple(r) for r in v) for k, v in doc["dual_action"].items()}
        if "dual_action" in doc
        else None,
        m0=doc.get("m0"),
        regular_of=RingSection.from_json(reg) if isinstance(reg, dict) else reg,
    )


def _canonical(obj: Any, indent: int) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_canonical(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(x, (dict, list, tuple)) for x in obj):
            return "[" + ", ".join(json.dumps(x, ensure_ascii=False) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + _canonical(x, indent + 1) for x in obj) + "\n" + end + "]"
    return json.dumps(obj, ensure_ascii=False)


def canonical_json(obj: Any) -> str:
    """Sorted keys, two-space indent, scalar lists kept on one line."""
    return _canonical(obj, 0) + "\n"


def emit(doc: ActionDocument) -> str:
    return canonical_json(doc.to_json())


def document_from_action(action: BimoduleAction, name: str | None = None, source: str | None = None) -> ActionDocument:
    ring, dual = action.ring, action.dual_ring
    return ActionDocument(
        Y={dual.labels[i]: y for i, y in enumerate(action.Y or ()) if y},
        name=name,
        source=source,
        ring=RingSection.from_ring(ring),
        objects=action.objects,
        action={ring.labels[a]: action.module.L[a] for a in range(ring.rank)},
        dual_ring=RingSection.from_ring(dual),
        dual_action={dual.labels[e]: action.R[e] for e in range(dual.rank)},
        m0=action.objects[action.m0],
    )
