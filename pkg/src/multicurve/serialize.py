"""JSON forms of every exchanged value, with schemas.

``dumps`` is the one emitter: sorted keys, two-space indent, trailing
newline.  Parsing then emitting any document it produced gives the same bytes.
"""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from .decomposition import MoveMap, PantsDecomposition
from .errors import SchemaError
from .farey import Slope
from .g0lab import AbstractVertex, Loop
from .metric import FNMetric
from .surface import Surface, SurfaceSpec, build_surface, sort_key

SLOPE = {"type": "string", "pattern": r"^-?\d+/\d+$"}
ID = {"type": "string", "minLength": 1}

SURFACE_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"const": "finite"}, "g": {"type": "integer", "minimum": 0}, "b": {"type": "integer", "minimum": 0}},
            "required": ["kind", "g", "b"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"enum": ["ladder", "lochness"]}, "window": {"type": "integer", "minimum": 1}},
            "required": ["kind", "window"],
            "additionalProperties": False,
        },
    ]
}

METRIC_SCHEMA = {
    "type": "object",
    "properties": {
        "M": {"type": "number", "exclusiveMinimum": 0},
        "lengths": {"type": "object", "additionalProperties": {"type": "number", "exclusiveMinimum": 0}},
        "twists": {"type": "object", "additionalProperties": {"type": "number"}},
        "periodic": {"type": "object", "additionalProperties": {"type": "number", "exclusiveMinimum": 0}},
    },
    "required": ["M"],
    "additionalProperties": False,
}

_PERIODIC = {"type": "object", "additionalProperties": {"type": "array", "items": {"anyOf": [SLOPE, {"type": "null"}]}, "minItems": 1}}

DECOMPOSITION_SCHEMA = {
    "type": "object",
    "properties": {
        "surface": SURFACE_SCHEMA,
        "base": {"const": "canonical"},
        "excitations": {
            "type": "array",
            "items": {"type": "object", "properties": {"chart": ID, "slope": SLOPE}, "required": ["chart", "slope"], "additionalProperties": False},
        },
        "periodic": _PERIODIC,
    },
    "required": ["surface", "excitations"],
    "additionalProperties": False,
}

MOVEMAP_SCHEMA = {
    "type": "object",
    "properties": {
        "moves": DECOMPOSITION_SCHEMA["properties"]["excitations"],
        "periodic": _PERIODIC,
    },
    "required": ["moves"],
    "additionalProperties": False,
}

LOOP_SCHEMA = {
    "type": "object",
    "properties": {
        "surface": SURFACE_SCHEMA,
        "vertices": {"type": "array", "minItems": 3},
        "labels": {"type": "array", "items": {"enum": ["1", "inf"]}},
        "chords": {"type": "array"},
    },
    "required": ["vertices", "labels"],
    "additionalProperties": False,
}

_RECORD = {
    "type": "object",
    "properties": {
        "curve": ID,
        "window": {"type": "array", "items": ID},
        "crossings": {"type": "array", "items": ID},
        "length_upper": {"type": "number"},
    },
    "required": ["curve", "window", "crossings", "length_upper"],
}

VERTEX_SCHEMA = {
    "type": "object",
    "properties": {
        "records": {"type": "array", "items": _RECORD, "minItems": 1},
        "tail_complexity": {"type": ["number", "null"]},
        "tail_length": {"type": "number"},
    },
    "required": ["records"],
}

MULTICURVE_SCHEMA = {
    "type": "object",
    "properties": {
        "curves": {"type": "array", "items": ID, "minItems": 1},
        "tail_complexity": {"type": ["number", "null"]},
    },
    "required": ["curves"],
    "additionalProperties": False,
}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "properties": {
        "format": {"const": "ginf-path/1"},
        "kind": {"enum": ["trivial", "edge", "full"]},
        "dual_graph": {"type": "object", "required": ["surface", "pants", "curves"]},
        "metric": METRIC_SCHEMA,
        "L": {"type": "number"},
        "epsilon": {"type": "number"},
        "path": {"type": "array", "items": VERTEX_SCHEMA, "minItems": 1},
    },
    "required": ["format", "kind", "dual_graph", "metric", "L", "path"],
}

SCHEMAS = {
    "surface": SURFACE_SCHEMA,
    "metric": METRIC_SCHEMA,
    "decomposition": DECOMPOSITION_SCHEMA,
    "movemap": MOVEMAP_SCHEMA,
    "loop": LOOP_SCHEMA,
    "multicurve": MULTICURVE_SCHEMA,
    "certificate": CERTIFICATE_SCHEMA,
}


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, schema: str | None = None) -> Any:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if schema is not None:
        validate(data, schema)
    return data


def validate(data: Any, schema: str):
    try:
        jsonschema.validate(data, SCHEMAS[schema])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{schema} field {where}: {exc.message}") from exc


def load_file(path: str, schema: str | None = None) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), schema)


# surfaces and metrics


def surface_to_json(surf: Surface | SurfaceSpec) -> dict:
    spec = surf.spec if isinstance(surf, Surface) else surf
    return spec.to_json()


def surface_from_json(data: dict) -> Surface:
    validate(data, "surface")
    return build_surface(SurfaceSpec.from_json(data))


def metric_from_json(data: dict) -> FNMetric:
    validate(data, "metric")
    return FNMetric.from_json(data)


# decompositions and move maps


def _slopes_out(vals) -> list:
    return [None if v is None else str(v) for v in vals]


def _slopes_in(vals) -> tuple:
    return tuple(None if v is None else Slope.parse(v) for v in vals)


def decomposition_to_json(X: PantsDecomposition) -> dict:
    out = {
        "surface": X.surface.spec.to_json(),
        "base": "canonical",
        "excitations": [{"chart": c, "slope": str(s)} for c, s in X.overrides.items()],
    }
    if X.pattern:
        out["periodic"] = {fam: _slopes_out(vals) for fam, vals in X.pattern}
    return out


def decomposition_from_json(data: dict, surface: Surface | None = None) -> PantsDecomposition:
    validate(data, "decomposition")
    surf = surface or build_surface(SurfaceSpec.from_json(data["surface"]))
    over = {e["chart"]: Slope.parse(e["slope"]) for e in data["excitations"]}
    pattern = {fam: _slopes_in(vals) for fam, vals in data.get("periodic", {}).items()}
    return PantsDecomposition(surf, over, pattern or None)


def movemap_to_json(mm: MoveMap) -> dict:
    out = {"moves": [{"chart": c, "slope": str(s)} for c, s in mm.moves]}
    if mm.pattern:
        out["periodic"] = {fam: _slopes_out(vals) for fam, vals in mm.pattern}
    return out


def movemap_from_json(data: dict) -> MoveMap:
    validate(data, "movemap")
    moves = {e["chart"]: e["slope"] for e in data["moves"]}
    pattern = {fam: list(vals) for fam, vals in data.get("periodic", {}).items()}
    return MoveMap.of(moves, pattern or None)


# loops


def loop_to_json(L: Loop) -> dict:
    first = L.vertices[0]
    if isinstance(first, AbstractVertex):
        vs = [{"name": v.name, "curves": sorted(v.curves)} for v in L.vertices]
        chords = [{"between": list(k), "label": lab} for k, lab in sorted((L.chords or {}).items())]
        return {"vertices": vs, "labels": list(L.labels), "chords": chords}
    vs = []
    for X in L.vertices:
        d = decomposition_to_json(X)
        del d["surface"]
        vs.append(d)
    return {"surface": first.surface.spec.to_json(), "vertices": vs, "labels": list(L.labels)}


def loop_from_json(data: dict) -> Loop:
    validate(data, "loop")
    if "surface" not in data:
        vs = [AbstractVertex.of(v["name"], v["curves"]) for v in data["vertices"]]
        chords = {tuple(c["between"]): c["label"] for c in data.get("chords", [])}
        return Loop.abstract(vs, data["labels"], chords)
    surf = surface_from_json(data["surface"])
    vs = [decomposition_from_json(dict(v, surface=data["surface"]), surf) for v in data["vertices"]]
    loop = Loop.of(vs)
    if list(loop.labels) != list(data["labels"]):
        raise SchemaError("stored labels disagree with the vertices")
    return loop


# G-infinity vertices


def multicurve_from_json(data: dict, surf: Surface, metric: FNMetric):
    """A vertex from a plain curve list (``"c3"`` or ``"c3@0/1"``)."""
    from .diameter import GInfVertex

    validate(data, "multicurve")
    return GInfVertex.from_curves(surf, metric, data["curves"], tail_complexity=data.get("tail_complexity", 0))


def multicurve_to_json(v) -> dict:
    return {"curves": sorted((str(c) for c in v.curves), key=sort_key), "tail_complexity": v.tail_complexity}
