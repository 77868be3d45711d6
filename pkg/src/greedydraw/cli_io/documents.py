"""JSON documents for graphs, drawings and verification reports.

All decimals are written as strings.  Coordinates are printed with enough
digits to round-trip bit-exactly at the drawing's precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import mpmath

from greedydraw.layout import Drawing, Witnesses
from greedydraw.plane_graph import PlaneGraph, PlaneGraphError

GRAPH_FORMAT = "greedydraw/graph"
DRAWING_FORMAT = "greedydraw/drawing"
REPORT_FORMAT = "greedydraw/report"
VERSION = 1


class DocumentError(ValueError):
    """Malformed document; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


# ---------------------------------------------------------------------------
# Small field readers
# ---------------------------------------------------------------------------


def _need(obj: Mapping, key: str, path: str) -> Any:
    if not isinstance(obj, Mapping):
        raise DocumentError(path, "expected an object")
    if key not in obj:
        raise DocumentError(f"{path}.{key}" if path else key, "missing field")
    return obj[key]


def _vertex_id(raw: Any, path: str) -> int:
    if isinstance(raw, bool):
        raise DocumentError(path, "vertex id must be an integer")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        try:
            return int(raw)
        except ValueError:
            pass
    raise DocumentError(path, f"vertex id must be an integer, got {raw!r}")


def _decimal(raw: Any, path: str) -> str:
    if not isinstance(raw, str):
        raise DocumentError(path, "decimals are stored as strings")
    try:
        mpmath.mpf(raw)
    except (ValueError, TypeError):
        raise DocumentError(path, f"not a decimal number: {raw!r}") from None
    return raw


def _check_header(doc: Any, fmt: str) -> None:
    if not isinstance(doc, Mapping):
        raise DocumentError("", "document must be a JSON object")
    got = _need(doc, "format", "")
    if got != fmt:
        raise DocumentError("format", f"expected {fmt!r}, got {got!r}")
    version = _need(doc, "version", "")
    if version != VERSION:
        raise DocumentError("version", f"unsupported version {version!r}")


def _path(raw: Any, where: str) -> tuple[int, ...]:
    if not isinstance(raw, list) or not raw:
        raise DocumentError(where, "expected a non-empty list of vertex ids")
    return tuple(_vertex_id(x, f"{where}[{i}]") for i, x in enumerate(raw))


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------


@dataclass
class GraphDocument:
    graph: PlaneGraph
    labels: dict[int, str] = field(default_factory=dict)
    u: Optional[int] = None
    v: Optional[int] = None

    def to_json(self) -> dict:
        out: dict = {
            "format": GRAPH_FORMAT,
            "version": VERSION,
            "vertices": [
                ({"id": z, "label": self.labels[z]} if z in self.labels else {"id": z})
                for z in sorted(self.graph.rotation)
            ],
            "rotations": {str(z): list(ns) for z, ns in sorted(self.graph.rotation.items())},
            "outer_dart": list(self.graph.outer_dart),
        }
        if self.u is not None:
            out["u"] = self.u
        if self.v is not None:
            out["v"] = self.v
        return out

    @classmethod
    def from_json(cls, doc: Any) -> "GraphDocument":
        _check_header(doc, GRAPH_FORMAT)
        raw_vertices = _need(doc, "vertices", "")
        if not isinstance(raw_vertices, list):
            raise DocumentError("vertices", "expected a list")
        ids: list[int] = []
        labels: dict[int, str] = {}
        for i, entry in enumerate(raw_vertices):
            where = f"vertices[{i}]"
            z = _vertex_id(_need(entry, "id", where), f"{where}.id")
            if z in ids:
                raise DocumentError(f"{where}.id", f"duplicate vertex id {z}")
            ids.append(z)
            if "label" in entry:
                if not isinstance(entry["label"], str):
                    raise DocumentError(f"{where}.label", "label must be a string")
                labels[z] = entry["label"]
        raw_rot = _need(doc, "rotations", "")
        if not isinstance(raw_rot, Mapping):
            raise DocumentError("rotations", "expected an object keyed by vertex id")
        rotation: dict[int, tuple[int, ...]] = {}
        for key, ns in raw_rot.items():
            where = f"rotations.{key}"
            z = _vertex_id(key, where)
            if z not in ids:
                raise DocumentError(where, f"vertex {z} is not listed in vertices")
            if not isinstance(ns, list):
                raise DocumentError(where, "expected a list of neighbour ids")
            rotation[z] = tuple(_vertex_id(w, f"{where}[{j}]") for j, w in enumerate(ns))
        for z in ids:
            if z not in rotation:
                raise DocumentError(f"rotations.{z}", "missing rotation for listed vertex")
        dart = _need(doc, "outer_dart", "")
        if not isinstance(dart, list) or len(dart) != 2:
            raise DocumentError("outer_dart", "expected [tail, head]")
        dart_t = (_vertex_id(dart[0], "outer_dart[0]"), _vertex_id(dart[1], "outer_dart[1]"))
        try:
            g = PlaneGraph(rotation, dart_t)
        except PlaneGraphError as exc:
            raise DocumentError("rotations", str(exc)) from None
        u = _vertex_id(doc["u"], "u") if doc.get("u") is not None else None
        v = _vertex_id(doc["v"], "v") if doc.get("v") is not None else None
        for name, z in (("u", u), ("v", v)):
            if z is not None and z not in rotation:
                raise DocumentError(name, f"unknown vertex {z}")
        return cls(g, labels, u, v)


# ---------------------------------------------------------------------------
# Drawings
# ---------------------------------------------------------------------------


def format_decimal(x, precision: int) -> str:
    """Shortest-safe decimal text that parses back to the same ``precision``-bit value."""
    return mpmath.libmp.to_str(x._mpf_, mpmath.libmp.repr_dps(precision))


def _witnesses_json(w: Witnesses) -> dict:
    return {
        "to_v": {str(z): list(p) for z, p in sorted(w.to_v.items())},
        "to_u": {str(z): list(p) for z, p in sorted(w.to_u.items())},
        "pairs": [[x, y, list(p)] for (x, y), p in sorted(w.pairs.items())],
    }


def _witnesses_from(raw: Any) -> Witnesses:
    where = "witnesses"
    tables = []
    for key in ("to_v", "to_u"):
        table = _need(raw, key, where)
        if not isinstance(table, Mapping):
            raise DocumentError(f"{where}.{key}", "expected an object keyed by vertex id")
        tables.append({_vertex_id(z, f"{where}.{key}.{z}"): _path(p, f"{where}.{key}.{z}") for z, p in table.items()})
    pairs_raw = _need(raw, "pairs", where)
    if not isinstance(pairs_raw, list):
        raise DocumentError(f"{where}.pairs", "expected a list of [x, y, path]")
    pairs = {}
    for i, entry in enumerate(pairs_raw):
        at = f"{where}.pairs[{i}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise DocumentError(at, "expected [x, y, path]")
        pairs[_vertex_id(entry[0], f"{at}[0]"), _vertex_id(entry[1], f"{at}[1]")] = _path(entry[2], f"{at}[2]")
    return Witnesses(tables[0], tables[1], pairs)


@dataclass
class DrawingDocument:
    drawing: Drawing
    labels: dict[int, str] = field(default_factory=dict)
    provenance: Optional[dict] = None

    def to_json(self) -> dict:
        d = self.drawing
        p = d.precision
        out: dict = {
            "format": DRAWING_FORMAT,
            "version": VERSION,
            "alpha": d.alpha,
            "delta": d.delta,
            "precision_bits": p,
            "u": d.u,
            "v": d.v,
            "positions": {
                str(z): {"x": format_decimal(x, p), "y": format_decimal(y, p)}
                for z, (x, y) in sorted(d.positions.items())
            },
            "graph": GraphDocument(d.graph, self.labels, d.u, d.v).to_json(),
        }
        prov = self.provenance
        if prov is None and d.record is not None:
            prov = d.record.summary()
        if prov is not None:
            out["provenance"] = prov
        if d.witnesses is not None:
            out["witnesses"] = _witnesses_json(d.witnesses)
        return out

    @classmethod
    def from_json(cls, doc: Any, graph: Optional[GraphDocument] = None) -> "DrawingDocument":
        """Parse a drawing; ``graph`` overrides the embedded graph document."""
        _check_header(doc, DRAWING_FORMAT)
        alpha = _decimal(_need(doc, "alpha", ""), "alpha")
        delta = _decimal(_need(doc, "delta", ""), "delta")
        precision = _need(doc, "precision_bits", "")
        if not isinstance(precision, int) or isinstance(precision, bool) or precision < 53:
            raise DocumentError("precision_bits", "expected an integer number of bits (at least 53)")
        if graph is None:
            try:
                graph = GraphDocument.from_json(_need(doc, "graph", ""))
            except DocumentError as exc:
                raise DocumentError(f"graph.{exc.path}" if exc.path else "graph", str(exc).split(": ", 1)[-1]) from None
        g = graph.graph
        u = _vertex_id(_need(doc, "u", ""), "u")
        v = _vertex_id(_need(doc, "v", ""), "v")
        ctx = mpmath.MPContext()
        ctx.prec = precision
        raw_pos = _need(doc, "positions", "")
        if not isinstance(raw_pos, Mapping):
            raise DocumentError("positions", "expected an object keyed by vertex id")
        pos = {}
        for key, xy in raw_pos.items():
            where = f"positions.{key}"
            z = _vertex_id(key, where)
            x = _decimal(_need(xy, "x", where), f"{where}.x")
            y = _decimal(_need(xy, "y", where), f"{where}.y")
            pos[z] = (ctx.mpf(x), ctx.mpf(y))
        missing = sorted(set(g.rotation) - set(pos))
        if missing:
            raise DocumentError("positions", f"no position for vertices {missing}")
        extra = sorted(set(pos) - set(g.rotation))
        if extra:
            raise DocumentError("positions", f"positions for unknown vertices {extra}")
        for name, z in (("u", u), ("v", v)):
            if z not in g.rotation:
                raise DocumentError(name, f"unknown vertex {z}")
        witnesses = _witnesses_from(doc["witnesses"]) if doc.get("witnesses") is not None else None
        d = Drawing(g, u, v, pos, alpha, delta, precision, witnesses)
        return cls(d, graph.labels, doc.get("provenance"))


# ---------------------------------------------------------------------------
# Text helpers
# ---------------------------------------------------------------------------


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def loads(text: str, what: str = "document") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("", f"{what} is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}") from None
