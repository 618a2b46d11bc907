"""Instance files: one JSON document, numbers as exact decimal or fraction strings.

Schema::

    {
      "polygon":  [["0", "0"], ["2", "0"], ...],          # required
      "guards":   "vertices"                              # default
                | {"vertices": true, "per_edge": 3}
                | [["1/2", "0"], ...],                     # explicit boundary points
      "target":   "polygon" | {"points": [["x", "y"], ...]},
      "strategy": "auto" | "quadratic" | "hierarchical" | "random",
      "epsilon":  "1/16",   "cprime": 1,   "samples": 1000,   "seed": 0
    }

Integers may be given as JSON integers; JSON floats are rejected so that no
coordinate is ever rounded through binary floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .fragmentation import SiteSet
from .geometry import (
    GeometryError,
    Location,
    Point,
    PointOutsidePolygon,
    locate,
    to_scalar,
    validate_polygon,
)
from .solver import STRATEGIES, Instance
from .visibility import WholePolygon


class ParseError(ValueError):
    def __init__(self, message: str, field: str = "", line: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.field = field
        self.line = line


class ValidationError(ValueError):
    pass


@dataclass
class InstanceFile:
    instance: Instance
    epsilon: Optional[Fraction] = None
    cprime: Optional[int] = None
    samples: Optional[int] = None


def _num(value, field: str) -> Fraction:
    if isinstance(value, float):
        raise ParseError("floating-point literal; quote the number as a string", field)
    try:
        return to_scalar(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), field) from exc


def _point(value, field: str) -> Point:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ParseError("expected a pair [x, y]", field)
    return Point(_num(value[0], f"{field}[0]"), _num(value[1], f"{field}[1]"))


def _points(value, field: str) -> list[Point]:
    if not isinstance(value, list):
        raise ParseError("expected a list of points", field)
    return [_point(v, f"{field}[{i}]") for i, v in enumerate(value)]


def _int(value, field: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError("expected an integer", field)
    if value < minimum:
        raise ParseError(f"must be at least {minimum}", field)
    return value


def instance_from_dict(doc) -> InstanceFile:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    if "polygon" not in doc:
        raise ParseError("missing", "polygon")
    try:
        polygon = validate_polygon(_points(doc["polygon"], "polygon"))
    except GeometryError as exc:
        raise ValidationError(f"polygon: {exc}") from exc

    guards = doc.get("guards", "vertices")
    try:
        if guards == "vertices":
            sites = SiteSet.vertices(polygon)
        elif isinstance(guards, dict):
            if guards.get("vertices") is not True:
                raise ParseError("object form needs \"vertices\": true", "guards")
            sites = SiteSet.vertices(polygon, _int(guards.get("per_edge", 0), "guards.per_edge"))
        else:
            sites = SiteSet.from_points(polygon, _points(guards, "guards"))
    except PointOutsidePolygon as exc:
        raise ValidationError(f"guards: {exc}") from exc
    if not sites.contains_vertices():
        raise ValidationError("guards: every polygon vertex must be a candidate site")

    target_doc = doc.get("target", "polygon")
    if target_doc == "polygon":
        target = WholePolygon
    elif isinstance(target_doc, dict) and "points" in target_doc:
        target = tuple(_points(target_doc["points"], "target.points"))
        for i, p in enumerate(target):
            if locate(polygon, p) is Location.EXTERIOR:
                raise ValidationError(f"target.points[{i}] lies outside the polygon")
    else:
        raise ParseError("expected \"polygon\" or {\"points\": [...]}", "target")

    strategy = doc.get("strategy", "auto")
    if strategy not in STRATEGIES:
        raise ParseError(f"one of {', '.join(STRATEGIES)}", "strategy")
    epsilon = None
    if "epsilon" in doc:
        epsilon = _num(doc["epsilon"], "epsilon")
        if epsilon <= 0 or epsilon.numerator != 1:
            raise ValidationError("epsilon: 1/epsilon must be a positive integer")
    cprime = _int(doc["cprime"], "cprime", 1) if "cprime" in doc else None
    samples = _int(doc["samples"], "samples", 1) if "samples" in doc else None
    seed = _int(doc.get("seed", 0), "seed")
    inst = Instance(polygon, sites, target, strategy, seed)
    return InstanceFile(inst, epsilon, cprime, samples)


def parse_instance(path) -> InstanceFile:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return instance_from_dict(doc)


def _s(v: Fraction) -> str:
    return str(v)


def instance_to_dict(f: InstanceFile) -> dict:
    inst = f.instance
    doc = {
        "polygon": [[_s(p.x), _s(p.y)] for p in inst.polygon.vertices],
        "guards": [[_s(s.point.x), _s(s.point.y)] for s in inst.sites],
        "target": ("polygon" if inst.target is WholePolygon
                   else {"points": [[_s(p.x), _s(p.y)] for p in inst.target]}),
        "strategy": inst.strategy,
        "seed": inst.seed,
    }
    if f.epsilon is not None:
        doc["epsilon"] = _s(f.epsilon)
    if f.cprime is not None:
        doc["cprime"] = f.cprime
    if f.samples is not None:
        doc["samples"] = f.samples
    return doc


def serialize_instance(f: InstanceFile, path=None) -> str:
    text = json.dumps(instance_to_dict(f), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
