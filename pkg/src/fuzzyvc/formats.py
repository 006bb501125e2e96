"""JSON instance files.

Every file is one JSON object with a ``type`` tag.  Rationals are strings
``"p/q"`` in lowest terms with ``q > 0``; index lists are 0-based and
strictly ascending.  ``dump_instance`` writes the canonical form (sorted
keys, no insignificant whitespace, trailing newline), and parsing then
re-dumping canonical bytes reproduces them exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .core import FunctionClass, FuzzyRelation, FuzzySet, FuzzySetSystem, Membership, SetSystem
from .errors import DomainError, InstanceError
from .widths import DiscreteMeasure

KINDS = ("fuzzy_system", "set_system", "function_class", "fuzzy_relation", "measure")
_RATIONAL = re.compile(r"^(-?\d+)/(\d+)$")

_KEYS = {
    "fuzzy_system": {"type", "ground_size", "sets"},
    "set_system": {"type", "ground_size", "sets"},
    "function_class": {"type", "points", "values"},
    "fuzzy_relation": {"type", "rows", "cols", "entries"},
    "measure": {"type", "weights"},
}


@dataclass(frozen=True)
class Instance:
    kind: str
    value: object


def format_rational(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def parse_rational(text, path: str = "") -> Fraction:
    if not isinstance(text, str):
        raise InstanceError("rational must be a \"p/q\" string", path)
    m = _RATIONAL.match(text)
    if not m:
        raise InstanceError(f"malformed rational {text!r}", path)
    num, den = int(m.group(1)), int(m.group(2))
    if den == 0:
        raise InstanceError("zero denominator", path)
    v = Fraction(num, den)
    if v.numerator != num or v.denominator != den:
        raise InstanceError(f"rational {text!r} is not in lowest terms", path)
    return v


def _int(obj, path: str, minimum: int = 0) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise InstanceError("expected an integer", path)
    if obj < minimum:
        raise InstanceError(f"expected an integer >= {minimum}", path)
    return obj


def _list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise InstanceError("expected a list", path)
    return obj


def _index_list(obj, path: str, bound: int) -> list:
    items = _list(obj, path)
    out = []
    for i, x in enumerate(items):
        x = _int(x, f"{path}[{i}]")
        if x >= bound:
            raise InstanceError(f"index {x} outside ground set of size {bound}", f"{path}[{i}]")
        if out and x <= out[-1]:
            raise InstanceError("indices must be strictly ascending", f"{path}[{i}]")
        out.append(x)
    return out


def _from_obj(obj) -> Instance:
    if not isinstance(obj, dict):
        raise InstanceError("instance must be a JSON object")
    kind = obj.get("type")
    if kind not in KINDS:
        raise InstanceError(f"unknown instance type {kind!r}", "type")
    extra = set(obj) - _KEYS[kind]
    missing = _KEYS[kind] - set(obj)
    if missing:
        raise InstanceError(f"missing field(s) {sorted(missing)}")
    if extra:
        raise InstanceError(f"unexpected field(s) {sorted(extra)}")

    if kind == "fuzzy_system":
        n = _int(obj["ground_size"], "ground_size")
        sets = []
        for i, s in enumerate(_list(obj["sets"], "sets")):
            path = f"sets[{i}]"
            if not isinstance(s, dict) or set(s) != {"plus", "minus"}:
                raise InstanceError("fuzzy set must have exactly the fields plus and minus", path)
            plus = _index_list(s["plus"], f"{path}.plus", n)
            minus = _index_list(s["minus"], f"{path}.minus", n)
            if set(plus) & set(minus):
                raise InstanceError(f"plus and minus are not disjoint: {sorted(set(plus) & set(minus))}",
                                    f"{path}.minus")
            sets.append(FuzzySet(plus, minus))
        return Instance(kind, FuzzySetSystem(n, tuple(sets)))

    if kind == "set_system":
        n = _int(obj["ground_size"], "ground_size")
        sets = [_index_list(s, f"sets[{i}]", n) for i, s in enumerate(_list(obj["sets"], "sets"))]
        return Instance(kind, SetSystem(n, tuple(sets)))

    if kind == "function_class":
        n = _int(obj["points"], "points")
        rows = []
        for i, row in enumerate(_list(obj["values"], "values")):
            row = _list(row, f"values[{i}]")
            if len(row) != n:
                raise InstanceError(f"row has {len(row)} values, expected {n}", f"values[{i}]")
            vals = []
            for j, v in enumerate(row):
                v = parse_rational(v, f"values[{i}][{j}]")
                if not 0 <= v <= 1:
                    raise InstanceError(f"value {v} outside [0, 1]", f"values[{i}][{j}]")
                vals.append(v)
            rows.append(vals)
        return Instance(kind, FunctionClass(n, tuple(rows)))

    if kind == "fuzzy_relation":
        nr = _int(obj["rows"], "rows")
        nc = _int(obj["cols"], "cols")
        entries = _list(obj["entries"], "entries")
        if len(entries) != nr:
            raise InstanceError(f"{len(entries)} rows, expected {nr}", "entries")
        matrix = []
        for i, row in enumerate(entries):
            row = _list(row, f"entries[{i}]")
            if len(row) != nc:
                raise InstanceError(f"row has {len(row)} entries, expected {nc}", f"entries[{i}]")
            for j, e in enumerate(row):
                if e not in ("+", "-", "*"):
                    raise InstanceError(f"entry {e!r} is not one of + - *", f"entries[{i}][{j}]")
            matrix.append(tuple(Membership(e) for e in row))
        return Instance(kind, FuzzyRelation(nr, nc, tuple(matrix)))

    weights = [parse_rational(w, f"weights[{i}]") for i, w in enumerate(_list(obj["weights"], "weights"))]
    for i, w in enumerate(weights):
        if w < 0:
            raise InstanceError("negative weight", f"weights[{i}]")
    if sum(weights) != 1:
        raise InstanceError(f"weights sum to {sum(weights)}, not 1", "weights")
    try:
        return Instance(kind, DiscreteMeasure(tuple(weights)))
    except DomainError as exc:
        raise InstanceError(str(exc), "weights") from exc


def parse_instance(data) -> Instance:
    """Parse and validate instance bytes (or text)."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceError(f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from exc
    return _from_obj(obj)


def kind_of(value) -> str:
    for kind, cls in (("fuzzy_system", FuzzySetSystem), ("set_system", SetSystem),
                      ("function_class", FunctionClass), ("fuzzy_relation", FuzzyRelation),
                      ("measure", DiscreteMeasure)):
        if isinstance(value, cls):
            return kind
    raise TypeError(f"no instance format for {type(value).__name__}")


def to_obj(value) -> dict:
    """The JSON object for a domain value (or an Instance)."""
    if isinstance(value, Instance):
        value = value.value
    kind = kind_of(value)
    if kind == "fuzzy_system":
        return {"type": kind, "ground_size": value.ground_size,
                "sets": [{"plus": sorted(s.plus), "minus": sorted(s.minus)} for s in value.sets]}
    if kind == "set_system":
        return {"type": kind, "ground_size": value.ground_size, "sets": [sorted(s) for s in value.sets]}
    if kind == "function_class":
        return {"type": kind, "points": value.point_count,
                "values": [[format_rational(v) for v in row] for row in value.rows]}
    if kind == "fuzzy_relation":
        return {"type": kind, "rows": value.x_size, "cols": value.y_size,
                "entries": [[e.value for e in row] for row in value.entries]}
    return {"type": kind, "weights": [format_rational(w) for w in value.weights]}


def canonical_json(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")


def dump_instance(value) -> bytes:
    return canonical_json(to_obj(value))
