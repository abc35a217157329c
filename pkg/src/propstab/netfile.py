"""Read and write the JSON network description format.

The format is strict: unknown keys are rejected at every level so that typos
fail loudly instead of silently changing the analysis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import NetworkModel, planar_subsystem
from .errors import SchemaError
from .graphs import WeightedDigraph
from .lti import StateSpace
from .simulation import Chirp, DisturbanceSignal, Pulse, SampledSignal, Tone

__all__ = [
    "SCHEMA_VERSION",
    "AnalysisOptions",
    "ParsedNetwork",
    "parse_network",
    "parse_network_text",
    "serialize_network",
    "network_to_json",
]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AnalysisOptions:
    """Optional per-file defaults for simulation and checking."""

    dt: float | None = None
    horizon: float | None = None
    rel_tol: float = 1e-6
    grid_points: int | None = None
    seed: int | None = None


@dataclass(frozen=True, eq=False)
class ParsedNetwork:
    model: NetworkModel
    disturbance: DisturbanceSignal | None
    options: AnalysisOptions


def _require_keys(obj: dict, where: str, required: dict, optional: dict) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where} must be an object, got {type(obj).__name__}")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise SchemaError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")
    missing = set(required) - set(obj)
    if missing:
        raise SchemaError(f"missing key(s) in {where}: {', '.join(sorted(missing))}")


def _number(obj: dict, key: str, where: str) -> float:
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SchemaError(f"{where}.{key} must be a number, got {val!r}")
    return float(val)


def _integer(obj: dict, key: str, where: str) -> int:
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise SchemaError(f"{where}.{key} must be an integer, got {val!r}")
    return val


def _number_or_list(obj: dict, key: str, where: str):
    val = obj[key]
    if isinstance(val, list):
        bad = [v for v in val if isinstance(v, bool) or not isinstance(v, (int, float))]
        if bad:
            raise SchemaError(f"{where}.{key} must hold numbers only")
        return [float(v) for v in val]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SchemaError(f"{where}.{key} must be a number or list of numbers, got {val!r}")
    return float(val)


def _matrix(obj: dict, key: str, where: str) -> list[list[float]]:
    val = obj[key]
    if (not isinstance(val, list) or not val
            or any(not isinstance(row, list) for row in val)):
        raise SchemaError(f"{where}.{key} must be a non-empty list of rows")
    widths = {len(row) for row in val}
    if len(widths) != 1 or 0 in widths:
        raise SchemaError(f"{where}.{key} rows must be non-empty and equal length")
    out = []
    for row in val:
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SchemaError(f"{where}.{key} must hold numbers only")
        out.append([float(v) for v in row])
    return out


def _parse_subsystem(obj: dict) -> StateSpace:
    if not isinstance(obj, dict):
        raise SchemaError("subsystem must be an object")
    if "template" in obj:
        _require_keys(obj, "subsystem", {"template": None, "d": None}, {})
        if obj["template"] != "planar":
            raise SchemaError(f"unknown subsystem template {obj['template']!r}")
        d = _number(obj, "d", "subsystem")
        if d <= 0.0:
            raise SchemaError(f"subsystem.d must be positive, got {d}")
        return planar_subsystem(d)
    _require_keys(obj, "subsystem", {"A": None, "B": None, "C": None}, {})
    return StateSpace(
        A=_matrix(obj, "A", "subsystem"),
        B=_matrix(obj, "B", "subsystem"),
        C=_matrix(obj, "C", "subsystem"),
    )


def _parse_edges(val: object) -> tuple[tuple[int, int, float], ...]:
    if not isinstance(val, list):
        raise SchemaError("edges must be a list")
    edges = []
    for idx, e in enumerate(val):
        where = f"edges[{idx}]"
        _require_keys(e, where, {"from": None, "to": None, "weight": None}, {})
        edges.append((
            _integer(e, "from", where),
            _integer(e, "to", where),
            _number(e, "weight", where),
        ))
    return tuple(edges)


_DISTURBANCE_FIELDS = {
    "tone": ({"kind": None, "amplitude": None, "omega": None}, {"phase": None}),
    "pulse": ({"kind": None, "amplitude": None, "start": None, "width": None}, {}),
    "chirp": (
        {"kind": None, "amplitude": None, "omega_start": None,
         "omega_end": None, "duration": None},
        {},
    ),
    "samples": ({"kind": None, "values": None, "dt": None}, {}),
}


def _parse_disturbance(obj: dict) -> DisturbanceSignal:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("disturbance must be an object with a 'kind'")
    kind = obj["kind"]
    if kind not in _DISTURBANCE_FIELDS:
        raise SchemaError(f"unknown disturbance kind {kind!r}")
    required, optional = _DISTURBANCE_FIELDS[kind]
    _require_keys(obj, "disturbance", required, optional)
    where = "disturbance"
    if kind == "tone":
        return Tone(
            amplitude=_number_or_list(obj, "amplitude", where),
            omega=_number(obj, "omega", where),
            phase=_number_or_list(obj, "phase", where) if "phase" in obj else 0.0,
        )
    if kind == "pulse":
        return Pulse(
            amplitude=_number_or_list(obj, "amplitude", where),
            start=_number(obj, "start", where),
            width=_number(obj, "width", where),
        )
    if kind == "chirp":
        return Chirp(
            amplitude=_number_or_list(obj, "amplitude", where),
            omega_start=_number(obj, "omega_start", where),
            omega_end=_number(obj, "omega_end", where),
            duration=_number(obj, "duration", where),
        )
    values = obj["values"]
    if not isinstance(values, list) or not values:
        raise SchemaError("disturbance.values must be a non-empty list")
    if isinstance(values[0], list):
        values = _matrix(obj, "values", where)
    else:
        values = [
            float(v) for v in values
            if not isinstance(v, bool) and isinstance(v, (int, float))
        ]
        if len(values) != len(obj["values"]):
            raise SchemaError("disturbance.values must hold numbers only")
    return SampledSignal(values=np.asarray(values, dtype=float), dt=_number(obj, "dt", where))


def _parse_options(obj: dict) -> AnalysisOptions:
    _require_keys(
        obj, "options", {},
        {"dt": None, "horizon": None, "rel_tol": None, "grid_points": None, "seed": None},
    )
    kwargs = {}
    if "dt" in obj:
        kwargs["dt"] = _number(obj, "dt", "options")
    if "horizon" in obj:
        kwargs["horizon"] = _number(obj, "horizon", "options")
    if "rel_tol" in obj:
        kwargs["rel_tol"] = _number(obj, "rel_tol", "options")
    if "grid_points" in obj:
        kwargs["grid_points"] = _integer(obj, "grid_points", "options")
    if "seed" in obj:
        kwargs["seed"] = _integer(obj, "seed", "options")
    for key in ("dt", "horizon", "rel_tol"):
        value = kwargs.get(key)
        if value is not None and value <= 0.0:
            raise SchemaError(f"options.{key} must be positive, got {value}")
    points = kwargs.get("grid_points")
    if points is not None and points < 2:
        raise SchemaError(f"options.grid_points must be at least 2, got {points}")
    return AnalysisOptions(**kwargs)


def parse_network_text(text: str) -> ParsedNetwork:
    """Parse a network description from raw JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    _require_keys(
        doc, "document",
        {"version": None, "vertices": None, "edges": None, "alpha": None, "subsystem": None},
        {"source": None, "disturbance": None, "options": None},
    )
    version = _integer(doc, "version", "document")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported version {version}, expected {SCHEMA_VERSION}")
    n_vertices = _integer(doc, "vertices", "document")
    if n_vertices < 1:
        raise SchemaError(f"vertices must be at least 1, got {n_vertices}")
    graph = WeightedDigraph(n_vertices=n_vertices, edges=_parse_edges(doc["edges"]))
    alpha = _number(doc, "alpha", "document")
    subsystem = _parse_subsystem(doc["subsystem"])
    source = None
    if "source" in doc:
        source = _integer(doc, "source", "document")
        if not 1 <= source <= n_vertices:
            raise SchemaError(f"source {source} outside 1..{n_vertices}")
    model = NetworkModel(graph=graph, alpha=alpha, subsystem=subsystem, source=source)
    disturbance = _parse_disturbance(doc["disturbance"]) if "disturbance" in doc else None
    options = _parse_options(doc["options"]) if "options" in doc else AnalysisOptions()
    return ParsedNetwork(model=model, disturbance=disturbance, options=options)


def parse_network(path_or_text: str | Path) -> ParsedNetwork:
    """Parse a network description from a file path or raw JSON text."""
    if not isinstance(path_or_text, Path):
        if path_or_text.lstrip().startswith("{"):
            return parse_network_text(path_or_text)
        path_or_text = Path(path_or_text)
    try:
        text = path_or_text.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path_or_text}: {exc}") from exc
    return parse_network_text(text)


def _serialize_disturbance(signal: DisturbanceSignal) -> dict:
    def plain(v):
        return list(v) if isinstance(v, (list, tuple, np.ndarray)) else v

    if isinstance(signal, Tone):
        out = {"kind": "tone", "amplitude": plain(signal.amplitude), "omega": signal.omega}
        if not (np.isscalar(signal.phase) and signal.phase == 0.0):
            out["phase"] = plain(signal.phase)
        return out
    if isinstance(signal, Pulse):
        return {
            "kind": "pulse", "amplitude": plain(signal.amplitude),
            "start": signal.start, "width": signal.width,
        }
    if isinstance(signal, Chirp):
        return {
            "kind": "chirp", "amplitude": plain(signal.amplitude),
            "omega_start": signal.omega_start, "omega_end": signal.omega_end,
            "duration": signal.duration,
        }
    if isinstance(signal, SampledSignal):
        return {"kind": "samples", "values": signal.values.tolist(), "dt": signal.dt}
    raise SchemaError(f"cannot serialize disturbance of type {type(signal).__name__}")


def serialize_network(
    model: NetworkModel,
    disturbance: DisturbanceSignal | None = None,
    options: AnalysisOptions | None = None,
) -> dict:
    """JSON-ready document for a model; explicit matrices, never the template form."""
    doc: dict = {
        "version": SCHEMA_VERSION,
        "vertices": model.graph.n_vertices,
        "edges": [
            {"from": tail, "to": head, "weight": weight}
            for tail, head, weight in model.graph.edges
        ],
        "alpha": model.alpha,
        "subsystem": {
            "A": model.subsystem.A.tolist(),
            "B": model.subsystem.B.tolist(),
            "C": model.subsystem.C.tolist(),
        },
    }
    if model.source is not None:
        doc["source"] = model.source
    if disturbance is not None:
        doc["disturbance"] = _serialize_disturbance(disturbance)
    if options is not None:
        opts: dict = {}
        if options.dt is not None:
            opts["dt"] = options.dt
        if options.horizon is not None:
            opts["horizon"] = options.horizon
        if options.rel_tol != 1e-6:
            opts["rel_tol"] = options.rel_tol
        if options.grid_points is not None:
            opts["grid_points"] = options.grid_points
        if options.seed is not None:
            opts["seed"] = options.seed
        if opts:
            doc["options"] = opts
    return doc


def network_to_json(
    model: NetworkModel,
    disturbance: DisturbanceSignal | None = None,
    options: AnalysisOptions | None = None,
    indent: int = 2,
) -> str:
    return json.dumps(serialize_network(model, disturbance, options), indent=indent)
