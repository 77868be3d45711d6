"""Construction-agnostic checks of a drawing.

Coordinates are dyadic rationals, so planarity, greediness and
distance-decreasing paths are decided exactly on a shared integer grid.
Slope tests involve ``tan``/``cos``/``sin`` of the angle parameter and are
decided with interval arithmetic; if an interval still straddles the
threshold after the precision retries, the verdict is ``indeterminate``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import mpmath

from greedydraw.decomposition import ScgTriple
from greedydraw.geometry import GridPoint, dist2, eps_star, orient, to_grid
from greedydraw.layout import Drawing, LayoutRecord, Witnesses, path_steps

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"


class Stuck(RuntimeError):
    pass


class HypothesisUnmet(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Optional[dict] = None
    checked: int = 0

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out = {"status": self.status, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _passed(n: int) -> Verdict:
    return Verdict(PASS, None, n)


def _combine(verdicts: Iterable[Verdict]) -> Verdict:
    verdicts = list(verdicts)
    n = sum(v.checked for v in verdicts)
    for status in (FAIL, INDETERMINATE):
        for v in verdicts:
            if v.status == status:
                return Verdict(status, v.witness, n)
    return _passed(n)


@dataclass
class VerificationReport:
    planar: Verdict
    greedy: Verdict
    properties: dict[str, Verdict]  # "2" .. "5"
    witness_paths: Verdict
    perturbation: Optional[Verdict] = None
    junctions: Optional[Verdict] = None
    extra: dict = field(default_factory=dict)

    def verdicts(self):
        yield "planar", self.planar
        yield "greedy", self.greedy
        for k, v in self.properties.items():
            yield f"property_{k}", v
        yield "witness_paths", self.witness_paths
        if self.perturbation is not None:
            yield "perturbation", self.perturbation
        if self.junctions is not None:
            yield "junctions", self.junctions

    @property
    def ok(self) -> bool:
        return all(v.ok for _, v in self.verdicts())

    def to_json(self) -> dict:
        out = {name: v.to_json() for name, v in self.verdicts()}
        out["ok"] = self.ok
        out.update(self.extra)
        return out


def _num(x) -> str:
    return mpmath.nstr(x, 20) if not isinstance(x, (int, str)) else str(x)


def _point_json(d: Drawing, z: int) -> list[str]:
    return [_num(c) for c in d.positions[z]]


# ---------------------------------------------------------------------------
# Exact planarity
# ---------------------------------------------------------------------------


def _on_segment(p: GridPoint, a: GridPoint, b: GridPoint) -> bool:
    return (
        orient(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _segments_meet(a, b, c, d) -> bool:
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    return _on_segment(c, a, b) or _on_segment(d, a, b) or _on_segment(a, c, d) or _on_segment(b, c, d)


def _crossing_point(d: Drawing, e, f) -> Optional[list[str]]:
    (a, b), (c, dd) = e, f
    p, q, r, s = (d.positions[z] for z in (a, b, c, dd))
    den = (q[0] - p[0]) * (s[1] - r[1]) - (q[1] - p[1]) * (s[0] - r[0])
    if den == 0:
        return None
    t = ((r[0] - p[0]) * (s[1] - r[1]) - (r[1] - p[1]) * (s[0] - r[0])) / den
    return [_num(p[0] + t * (q[0] - p[0])), _num(p[1] + t * (q[1] - p[1]))]


def _planar_grid(grid: Mapping[int, GridPoint], edges: Sequence[tuple[int, int]]) -> Optional[dict]:
    verts = sorted(grid)
    seen: dict[GridPoint, int] = {}
    for z in verts:
        if grid[z] in seen:
            return {"kind": "coincident_vertices", "vertices": [seen[grid[z]], z]}
        seen[grid[z]] = z
    for a, b in edges:
        for w in verts:
            if w != a and w != b and _on_segment(grid[w], grid[a], grid[b]):
                return {"kind": "vertex_on_edge", "vertex": w, "edge": [a, b]}
    boxes = sorted(
        (min(grid[a][0], grid[b][0]), max(grid[a][0], grid[b][0]), (a, b)) for a, b in edges
    )
    for i, (lo, hi, e) in enumerate(boxes):
        for lo2, _, f in boxes[i + 1:]:
            if lo2 > hi:
                break
            shared = set(e) & set(f)
            if shared:
                # adjacent edges only fail by overlapping, caught by vertex_on_edge
                continue
            if _segments_meet(grid[e[0]], grid[e[1]], grid[f[0]], grid[f[1]]):
                return {"kind": "crossing", "edges": [list(e), list(f)]}
    return None


def check_planar(d: Drawing) -> Verdict:
    grid, _ = to_grid(d.positions)
    edges = list(d.graph.edges)
    bad = _planar_grid(grid, edges)
    if bad is None:
        return _passed(len(edges))
    if bad["kind"] == "crossing":
        e, f = bad["edges"]
        bad["point"] = _crossing_point(d, tuple(e), tuple(f))
    return Verdict(FAIL, bad, len(edges))


# ---------------------------------------------------------------------------
# Greediness
# ---------------------------------------------------------------------------


def _distances(grid: Mapping[int, GridPoint]) -> dict[tuple[int, int], int]:
    verts = sorted(grid)
    out = {}
    for i, a in enumerate(verts):
        for b in verts[i:]:
            out[a, b] = out[b, a] = dist2(grid[a], grid[b])
    return out


def check_greedy(d: Drawing) -> Verdict:
    grid, _ = to_grid(d.positions)
    dd = _distances(grid)
    g = d.graph.graph
    n = 0
    for x in sorted(grid):
        nbrs = sorted(g.neighbors(x))
        for y in sorted(grid):
            if x == y:
                continue
            n += 1
            if not any(dd[w, y] < dd[x, y] for w in nbrs):
                return Verdict(FAIL, {"source": x, "target": y, "neighbors": nbrs}, n)
    return _passed(n)


def extract_greedy_path(d: Drawing, x: int, y: int, tie_break: str = "max-progress") -> tuple[int, ...]:
    """Follow strictly closer neighbours: the closest one to ``y`` first, then the smallest id."""
    if tie_break != "max-progress":
        raise ValueError(f"unknown tie-break rule {tie_break!r}")
    grid, _ = to_grid(d.positions)
    g = d.graph.graph
    path = [x]
    here = x
    while here != y:
        cur = dist2(grid[here], grid[y])
        options = [(dist2(grid[w], grid[y]), w) for w in g.neighbors(here)]
        options = [o for o in options if o[0] < cur]
        if not options:
            raise Stuck(f"no neighbour of {here} is closer to {y}")
        here = min(options)[1]
        path.append(here)
    return tuple(path)


# ---------------------------------------------------------------------------
# Interval-certified angle tests
# ---------------------------------------------------------------------------


class _Angles:
    """Decides strict angular inequalities against a fixed angle given as text or mpf."""

    def __init__(self, base_precision: int, retries: int = 2):
        self.levels = [max(128, base_precision) << i for i in range(retries + 1)]
        self._ctx = {}

    def iv(self, level: int):
        if level not in self._ctx:
            c = mpmath.MPIntervalContext()
            c.prec = level
            self._ctx[level] = c
        return self._ctx[level]

    @staticmethod
    def _exact(c, x):
        # strings and mpf values are enclosed outward by the interval context
        return c.mpf(x)

    def decide(self, fn) -> Optional[bool]:
        for level in self.levels:
            r = fn(self.iv(level))
            if r is not None:
                return r
        return None

    def less_than_tan(self, num: int, den: int, angle) -> Optional[bool]:
        """``num / den < tan(angle)`` for ``num >= 0``, ``den > 0``."""

        def fn(c):
            ratio = c.mpf(num) / c.mpf(den)
            t = c.tan(self._exact(c, angle))
            if ratio.b < t.a:
                return True
            if ratio.a >= t.b:
                return False
            return None

        return self.decide(fn)

    def side(self, angle, dx: int, dy: int) -> Optional[int]:
        """Sign of ``cross(direction(angle), (dx, dy))``: +1 left, -1 right, 0 on the line."""

        def fn(c):
            a = self._exact(c, angle)
            val = c.cos(a) * c.mpf(dy) - c.sin(a) * c.mpf(dx)
            if val.a > 0:
                return 1
            if val.b < 0:
                return -1
            if val.a == 0 and val.b == 0:
                return 0  # certified to lie on the line
            return None

        return self.decide(fn)


def _slope_text(d: Drawing, a: int, b: int) -> str:
    (x1, y1), (x2, y2) = d.positions[a], d.positions[b]
    ctx = d.context()
    return mpmath.nstr(ctx.atan2(y2 - y1, x2 - x1), 20)


def _slope_in(angles: _Angles, grid, a: int, b: int, window: str, alpha) -> Optional[bool]:
    """Strict membership of the slope of ``ab`` in one of the four windows around 0 or pi."""
    dx = grid[b][0] - grid[a][0]
    dy = grid[b][1] - grid[a][1]
    if window == "around0":
        if dx <= 0:
            return False
        return angles.less_than_tan(abs(dy), dx, alpha)
    if window == "below0":
        if dx <= 0 or dy >= 0:
            return False
        return angles.less_than_tan(-dy, dx, alpha)
    if window == "above0":
        if dx <= 0 or dy <= 0:
            return False
        return angles.less_than_tan(dy, dx, alpha)
    if window == "aroundpi":
        if dx >= 0:
            return False
        return angles.less_than_tan(abs(dy), -dx, alpha)
    raise ValueError(window)


_WINDOW_TEXT = {
    "around0": "(-alpha, alpha)",
    "below0": "(-alpha, 0)",
    "above0": "(0, alpha)",
    "aroundpi": "(pi - alpha, pi + alpha)",
}


def _check_edges(d, grid, angles, alpha, steps, label) -> Verdict:
    n = 0
    undecided = None
    for a, b, window in steps:
        n += 1
        r = _slope_in(angles, grid, a, b, window, alpha)
        if r is False:
            return Verdict(FAIL, {"edge": [a, b], "slope": _slope_text(d, a, b),
                                  "required": _WINDOW_TEXT[window], "where": label}, n)
        if r is None and undecided is None:
            undecided = {"edge": [a, b], "slope": _slope_text(d, a, b), "required": _WINDOW_TEXT[window]}
    if undecided:
        return Verdict(INDETERMINATE, undecided, n)
    return _passed(n)


def _path_problem(g, path: Sequence[int], start: int, end: int) -> Optional[str]:
    if not path or path[0] != start or path[-1] != end:
        return f"path does not run from {start} to {end}"
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            return f"{a}-{b} is not an edge"
    if len(set(path)) != len(path):
        return "path repeats a vertex"
    return None


# ---------------------------------------------------------------------------
# Properties 2 to 5 and the witness paths
# ---------------------------------------------------------------------------


def check_slope_properties(d: Drawing, t: ScgTriple, alpha=None) -> dict[str, Verdict]:
    alpha = d.alpha if alpha is None else alpha
    if len(t.vertices) < 3:
        # a single edge carries none of these properties
        return {k: _passed(0) for k in ("2", "3", "4", "5")}
    grid, _ = to_grid(d.positions)
    angles = _Angles(d.precision)
    u, v = t.u, t.v
    out: dict[str, Verdict] = {}

    tau = t.tau
    p2 = None
    for z in tau:
        if grid[z][1] != grid[u][1]:
            p2 = Verdict(FAIL, {"vertex": z, "y": _num(d.positions[z][1]), "y_u": _num(d.positions[u][1])}, len(tau))
            break
    if p2 is None and not grid[u][0] < grid[v][0]:
        p2 = Verdict(FAIL, {"vertex": u, "reason": "u is not left of v"}, len(tau))
    out["2"] = p2 or _passed(len(tau))

    beta = t.beta
    steps = [(beta[0], beta[1], "below0")] + [(a, b, "above0") for a, b in zip(beta[1:], beta[2:])]
    out["3"] = _check_edges(d, grid, angles, alpha, steps, "outer path")

    w = d.witnesses
    g = t.graph.graph
    for key, table, target, window in (("4", w and w.to_v, v, "around0"), ("5", w and w.to_u, u, "aroundpi")):
        if table is None:
            out[key] = Verdict(INDETERMINATE, {"reason": "drawing carries no witness paths"})
            continue
        verdicts = []
        for x in sorted(t.vertices):
            path = table.get(x)
            problem = "missing" if path is None else _path_problem(g, path, x, target)
            if problem is None and key == "4" and x != u and u in path:
                problem = "passes through u"
            if problem:
                verdicts.append(Verdict(FAIL, {"vertex": x, "path": list(path or ()), "reason": problem}, 1))
                break
            verdicts.append(_check_edges(d, grid, angles, alpha, [(a, b, window) for a, b in zip(path, path[1:])], f"path from {x}"))
            if verdicts[-1].status == FAIL:
                break
        out[key] = _combine(verdicts)
    return out


def _decreasing(dd, path: Sequence[int], y: int) -> Optional[int]:
    """Index of the first step that fails to approach ``y`` (or None)."""
    for i, (a, b) in enumerate(zip(path, path[1:])):
        if not dd[b, y] < dd[a, y]:
            return i
    return None


def check_witness_paths(d: Drawing, t: ScgTriple, grid=None) -> Verdict:
    """Every recorded pair path is a distance-decreasing path of G that avoids u when allowed."""
    w = d.witnesses
    if w is None:
        return Verdict(INDETERMINATE, {"reason": "drawing carries no witness paths"})
    if grid is None:
        grid, _ = to_grid(d.positions)
    dd = _distances(grid)
    g = t.graph.graph
    u = t.u
    n = 0
    verts = sorted(t.vertices)
    for x in verts:
        for y in verts:
            if x == y:
                continue
            n += 1
            path = w.pairs.get((x, y))
            problem = "missing" if path is None else _path_problem(g, path, x, y)
            if problem is None and x != u and y != u and u in path:
                problem = "passes through u"
            if problem is None:
                i = _decreasing(dd, path, y)
                if i is not None:
                    problem = f"step {path[i]}->{path[i + 1]} does not approach {y}"
            if problem:
                return Verdict(FAIL, {"source": x, "target": y, "path": list(path or ()), "reason": problem}, n)
    return _passed(n)


# ---------------------------------------------------------------------------
# Perturbation stability
# ---------------------------------------------------------------------------


def _recorded_dd_paths(w: Witnesses):
    for (_, y), p in w.pairs.items():
        yield p, y
    for p in (*w.to_v.values(), *w.to_u.values()):
        yield p, p[-1]


def perturbation_radius(d: Drawing):
    """Radius protecting planarity and the recorded distance-decreasing paths.

    Without recorded paths this is the plain perturbation radius over all
    vertex triples.
    """
    ctx = d.context()
    steps = None if d.witnesses is None else path_steps(d.witnesses)
    return eps_star(d.positions, d.graph.edges, ctx, steps)


def check_perturbation(
    d: Drawing,
    samples: int = 32,
    rng_seed: int = 0,
    *,
    radius=None,
    scale=1,
    boundary_fraction: float = 0.25,
) -> Verdict:
    """Displace every vertex by at most ``scale * radius`` and re-check.

    Displacements are uniform in the disk; a ``boundary_fraction`` of the
    samples uses the full length.  Planarity and every recorded
    distance-decreasing path are re-checked exactly after each sample.
    """
    if samples <= 0:
        return _passed(0)
    ctx = d.context()
    r = perturbation_radius(d) if radius is None else ctx.mpf(radius)
    r = r * scale
    # keep the rounded displacement inside the closed disk
    r = r * (1 - ctx.ldexp(1, -30))
    rng = random.Random(rng_seed)
    edges = list(d.graph.edges)
    paths = list(_recorded_dd_paths(d.witnesses)) if d.witnesses is not None else []
    verts = sorted(d.positions)
    for s in range(samples):
        moved = {}
        on_rim = rng.random() < boundary_fraction
        for z in verts:
            theta = rng.uniform(0.0, 2.0 * math.pi)
            length = r if on_rim else r * ctx.sqrt(ctx.mpf(rng.random()))
            x, y = d.positions[z]
            moved[z] = (x + length * ctx.cos(theta), y + length * ctx.sin(theta))
        grid, _ = to_grid(moved)
        bad = _planar_grid(grid, edges)
        if bad is not None:
            return Verdict(FAIL, {"sample": s, "planarity": bad, "radius": _num(r)}, s + 1)
        dd = _distances(grid)
        for p, y in paths:
            i = _decreasing(dd, p, y)
            if i is not None:
                return Verdict(FAIL, {"sample": s, "path": list(p), "target": y,
                                      "step": [p[i], p[i + 1]], "radius": _num(r)}, s + 1)
    return _passed(samples)


# ---------------------------------------------------------------------------
# Wedge containment
# ---------------------------------------------------------------------------


def check_wedge(
    positions: Mapping[int, tuple] | Drawing,
    apex: int,
    s1,
    s2,
    s3,
    side: str,
    *,
    vertices: Optional[Iterable[int]] = None,
    boundary: Sequence[Sequence[int]] = (),
    precision: int = 256,
) -> Verdict:
    """All ``vertices`` except ``apex`` lie strictly on ``side`` of the line through ``apex`` with slope ``s2``.

    ``boundary`` lists outer paths of the sub-drawing starting at ``apex``;
    their edge slopes must lie in ``(s3 - pi, s1)`` for ``side="right"`` and
    in ``(s3, s1 + pi)`` for ``side="left"``.  If they do not,
    :class:`HypothesisUnmet` is raised.
    """
    if isinstance(positions, Drawing):
        precision = positions.precision
        positions = positions.positions
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    angles = _Angles(precision)
    grid, _ = to_grid(positions)
    want = 1 if side == "left" else -1

    def slope_ok(dx, dy) -> Optional[bool]:
        # for a window of width at most pi both cases reduce to: the edge
        # points strictly to the wanted side of the directions s1 and s3
        first, second = angles.side(s3, dx, dy), angles.side(s1, dx, dy)
        if first is None or second is None:
            return None
        return first == want and second == want

    for path in boundary:
        if not path or path[0] != apex:
            raise ValueError("boundary paths must start at the apex")
        for a, b in zip(path, path[1:]):
            dx = grid[b][0] - grid[a][0]
            dy = grid[b][1] - grid[a][1]
            ok = slope_ok(dx, dy)
            if ok is not True:
                raise HypothesisUnmet(f"edge {a}-{b} has slope outside the admissible range")

    todo = sorted(positions if vertices is None else vertices)
    undecided = None
    n = 0
    ax, ay = grid[apex]
    for z in todo:
        if z == apex:
            continue
        n += 1
        s = angles.side(s2, grid[z][0] - ax, grid[z][1] - ay)
        if s is None:
            undecided = undecided or {"vertex": z}
        elif s != want:
            return Verdict(FAIL, {"vertex": z, "apex": apex, "side": side}, n)
    if undecided:
        return Verdict(INDETERMINATE, undecided, n)
    return _passed(n)


def check_junctions(record: LayoutRecord, precision: int) -> Verdict:
    verdicts = []
    for node in record.walk():
        for j in node.junctions:
            try:
                v = check_wedge(node.positions, j.apex, j.slope, j.slope, j.slope, j.side,
                                vertices=j.vertices, boundary=j.boundary, precision=precision)
            except HypothesisUnmet as exc:
                v = Verdict(FAIL, {"apex": j.apex, "hypothesis": str(exc)}, 1)
            if v.witness is not None:
                v = Verdict(v.status, dict(v.witness, node=[node.u, node.v]), v.checked)
            verdicts.append(v)
    return _combine(verdicts)


# ---------------------------------------------------------------------------
# Full report
# ---------------------------------------------------------------------------


def verify(
    d: Drawing,
    t: ScgTriple,
    *,
    perturb_samples: int = 0,
    seed: int = 0,
    junctions: bool = True,
) -> VerificationReport:
    props = check_slope_properties(d, t)
    report = VerificationReport(
        planar=check_planar(d),
        greedy=check_greedy(d),
        properties=props,
        witness_paths=check_witness_paths(d, t),
    )
    if perturb_samples:
        report.perturbation = check_perturbation(d, perturb_samples, seed)
    if junctions and d.record is not None:
        report.junctions = check_junctions(d.record, d.precision)
    report.extra = {"vertices": len(d.positions), "edges": len(d.graph.edges), "precision_bits": d.precision}
    return report
