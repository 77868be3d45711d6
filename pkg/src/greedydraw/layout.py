"""Recursive construction of planar greedy drawings.

Every node of the decomposition tree is drawn in its own frame: ``u`` at the
origin, ``v`` on the positive x-axis, the clockwise boundary path on the
x-axis and everything else strictly below it.  Parents reuse child drawings
through uniform scaling, rotation and translation.  Alongside coordinates the
construction records, for every node, three families of witness paths:

* ``to_v[x]``: a path from ``x`` to ``v`` with all slopes in ``(-a, a)``;
* ``to_u[x]``: a path from ``x`` to ``u`` with all slopes in ``(pi - a, pi + a)``;
* ``pairs[x, y]``: a distance-decreasing path from ``x`` to ``y``.

Coordinates are ``mpf`` values of a private mpmath context at the working
precision.  When the finished drawing has features too small to be resolved
at that precision, :class:`PrecisionExhausted` is raised and :func:`draw`
retries with twice the precision, up to a cap.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Union

import mpmath

from greedydraw.decomposition import DecompositionTree, Kind, ScgTriple, build_tree, classify
from greedydraw.geometry import DegenerateDrawing, eps_star as _eps_star, span
from greedydraw.plane_graph import PlaneGraph

DEFAULT_PRECISION = 256
DEFAULT_CAP = 4096
CAP_ENV = "GREEDYDRAW_PRECISION_CAP"
# every budget must exceed rounding noise by this many bits
GUARD_BITS = 40

Number = Union[str, int, float]
Path = tuple[int, ...]


class LayoutError(RuntimeError):
    pass


class PrecisionExhausted(LayoutError):
    def __init__(self, reason: str, precision: int, cap: Optional[int] = None, tried: tuple[int, ...] = ()):
        super().__init__(f"{reason} (precision {precision} bits)")
        self.reason = reason
        self.precision = precision
        self.cap = cap
        self.tried = tried

    def to_json(self) -> dict:
        return {
            "error": "PrecisionExhausted",
            "reason": self.reason,
            "precision_bits": self.precision,
            "cap_bits": self.cap,
            "tried_bits": list(self.tried),
        }


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Witnesses:
    to_v: Mapping[int, Path]
    to_u: Mapping[int, Path]
    pairs: Mapping[tuple[int, int], Path]


@dataclass(frozen=True)
class LayoutBudget:
    """Quantities that steer one construction step (``None`` when not used)."""

    perturbation_radius: object = None  # largest safe displacement of the child drawing
    lowest_depth: object = None  # smallest depth of a vertex strictly below the top line
    sag: object = None  # how far the first boundary joint is lowered
    chain_slope: object = None  # slope of the line carrying a block chain
    min_lower_slope: object = None  # smallest slope on the lower boundary of H
    wedge_angle: object = None  # slope of the segment from y_ell to v
    disk_radius: object = None  # radius around v that holds the chain
    u_offset: object = None  # leftward shift of the chain's first vertex
    child_alpha: object = None
    gap_to_v: object = None  # horizontal distance from y_1 to v

    def items(self):
        for name in self.__dataclass_fields__:
            val = getattr(self, name)
            if val is not None:
                yield name, val


@dataclass(frozen=True)
class Junction:
    """A sub-drawing expected to lie strictly on one side of a line through ``apex``."""

    apex: int
    slope: object
    side: str  # "left" | "right"
    vertices: tuple[int, ...]
    boundary: tuple[Path, ...]  # outer paths of the sub-drawing, starting at apex


@dataclass(frozen=True, eq=False)
class LayoutRecord:
    kind: Kind
    triple: ScgTriple
    alpha: object
    positions: Mapping[int, tuple]  # node frame, before any shift of u
    witnesses: Witnesses
    budget: LayoutBudget = field(default_factory=LayoutBudget)
    children: tuple["LayoutRecord", ...] = ()
    child_roles: tuple[str, ...] = ()  # "half" | "third" | "chain"
    junctions: tuple[Junction, ...] = ()

    @property
    def u(self) -> int:
        return self.triple.u

    @property
    def v(self) -> int:
        return self.triple.v

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def summary(self) -> dict:
        out = {
            "kind": self.kind.value,
            "u": self.u,
            "v": self.v,
            "vertices": len(self.positions),
            "alpha": mpmath.nstr(self.alpha, 17),
            "budget": {k: mpmath.nstr(val, 17) for k, val in self.budget.items()},
        }
        if self.children:
            out["children"] = [
                dict(c.summary(), role=r) for c, r in zip(self.children, self.child_roles)
            ]
        return out


@dataclass(frozen=True, eq=False)
class Drawing:
    graph: PlaneGraph
    u: int
    v: int
    positions: Mapping[int, tuple]
    alpha: str
    delta: str
    precision: int
    witnesses: Optional[Witnesses] = None
    record: Optional[LayoutRecord] = None

    @property
    def edges(self):
        return self.graph.edges

    def context(self):
        ctx = mpmath.MPContext()
        ctx.prec = self.precision
        return ctx


# ---------------------------------------------------------------------------
# Path helpers
# ---------------------------------------------------------------------------


def _join(*parts: Path) -> Path:
    out = list(parts[0])
    for p in parts[1:]:
        if not p:
            continue
        if out and p[0] == out[-1]:
            out.extend(p[1:])
        else:
            raise LayoutError(f"paths do not meet: {out[-1:]} then {p[:1]}")
    return tuple(out)


def _sub_path(path: Path, a: int, b: int) -> Path:
    i, j = path.index(a), path.index(b)
    return path[i:j + 1] if i <= j else tuple(reversed(path[j:i + 1]))


def path_steps(w: Witnesses):
    """Triples ``(a, b, z)``: the recorded paths step from ``a`` to ``b`` while heading for ``z``."""
    for p in (*w.to_v.values(), *w.to_u.values()):
        for a, b in zip(p, p[1:]):
            yield a, b, p[-1]
    for (_, y), p in w.pairs.items():
        for a, b in zip(p, p[1:]):
            yield a, b, y


class _Chain:
    """Witness algebra for layers glued one after another at single vertices."""

    def __init__(self, joints: tuple[int, ...], layers: list[tuple[set, Path, Witnesses]]):
        self.joints = joints
        self.layers = layers
        self.where: dict[int, list[int]] = {}
        for i, (verts, _, _) in enumerate(layers):
            for x in verts:
                self.where.setdefault(x, []).append(i)

    def tau(self, i: int) -> Path:
        return self.layers[i][1]

    def w(self, i: int) -> Witnesses:
        return self.layers[i][2]

    def right(self, x: int) -> Path:
        i = min(self.where[x])
        return _join(self.w(i).to_v[x], *(self.tau(j) for j in range(i + 1, len(self.layers))))

    def left(self, x: int) -> Path:
        i = max(self.where[x])
        return _join(self.w(i).to_u[x], *(tuple(reversed(self.tau(j))) for j in range(i - 1, -1, -1)))

    def pair(self, x: int, y: int) -> Path:
        ix, iy = self.where[x], self.where[y]
        common = set(ix) & set(iy)
        if common:
            return self.w(min(common)).pairs[(x, y)]
        if max(ix) < min(iy):
            i, j = min(ix), min(iy)
            middle = [self.tau(m) for m in range(i + 1, j)]
            return _join(self.w(i).to_v[x], *middle, self.w(j).pairs[(self.joints[j], y)])
        i, j = max(ix), max(iy)
        middle = [tuple(reversed(self.tau(m))) for m in range(i - 1, j, -1)]
        return _join(self.w(i).to_u[x], *middle, self.w(j).pairs[(self.joints[j + 1], y)])


def _sagged_witnesses(w: Witnesses, top: Path) -> Witnesses:
    """Witnesses after the interior of the top path ``top`` has been pushed down."""
    u = top[0]
    at = {x: i for i, x in enumerate(top)}
    to_v: dict[int, Path] = {}
    to_u: dict[int, Path] = {}
    for x, p in w.to_v.items():
        if x == u:
            to_v[x] = top
            continue
        h = next(h for h, z in enumerate(p) if z in at and z != u)
        to_v[x] = p[: h + 1] + top[at[p[h]] + 1:]
    for x, p in w.to_u.items():
        if x == u:
            to_u[x] = (u,)
            continue
        h = next((h for h, z in enumerate(p) if z in at and z != u), None)
        to_u[x] = p if h is None else p[: h + 1] + tuple(reversed(top[: at[p[h]]]))
    pairs = {k: (to_u[k[0]] if k[1] == u else p) for k, p in w.pairs.items()}
    return Witnesses(to_v, to_u, pairs)


# ---------------------------------------------------------------------------
# The recursive builder
# ---------------------------------------------------------------------------


class _Builder:
    def __init__(self, ctx):
        self.ctx = ctx
        self.floor = ctx.ldexp(1, -(ctx.prec - GUARD_BITS))

    # -- numeric guards ---------------------------------------------------

    def _resolved(self, name: str, value, scale) -> None:
        if not value > 0:
            raise PrecisionExhausted(f"{name} is not positive", self.ctx.prec)
        if not value > scale * self.floor:
            raise PrecisionExhausted(f"{name} falls below the resolution of the working precision", self.ctx.prec)

    def _check_alpha(self, alpha) -> None:
        if not 0 < alpha < self.ctx.pi / 4:
            raise LayoutError(f"angle parameter {alpha} outside (0, pi/4)")

    @staticmethod
    def _depth(positions) -> Optional[object]:
        below = [-y for _, y in positions.values() if y < 0]
        return min(below) if below else None

    def _eps_star(self, rec: LayoutRecord):
        try:
            return _eps_star(rec.positions, rec.triple.graph.edges, self.ctx, path_steps(rec.witnesses))
        except DegenerateDrawing as exc:
            raise PrecisionExhausted(f"degenerate child drawing: {exc}", self.ctx.prec) from exc

    def dist(self, p, q):
        return self.ctx.hypot(p[0] - q[0], p[1] - q[1])

    # -- dispatch -----------------------------------------------------------

    def build(self, tree: DecompositionTree, alpha) -> LayoutRecord:
        self._check_alpha(alpha)
        if tree.kind is Kind.TRIVIAL:
            return self.trivial(tree.triple, alpha)
        if tree.kind is Kind.CYCLE:
            return self.cycle(tree.triple, alpha)
        if tree.kind is Kind.CASE_A:
            return self.case_a(tree, alpha)
        return self.case_b(tree, alpha)

    # -- leaves ---------------------------------------------------------------

    def trivial(self, t: ScgTriple, alpha) -> LayoutRecord:
        ctx = self.ctx
        u, v = t.u, t.v
        pos = {u: (ctx.zero, ctx.zero), v: (ctx.one, ctx.zero)}
        w = Witnesses({u: (u, v), v: (v,)}, {v: (v, u), u: (u,)}, {(u, v): (u, v), (v, u): (v, u)})
        return LayoutRecord(Kind.TRIVIAL, t, alpha, pos, w)

    def cycle(self, t: ScgTriple, alpha) -> LayoutRecord:
        ctx = self.ctx
        b = t.beta
        m = len(b)
        depth = ctx.tan(alpha / 2) / 2
        pos = {b[0]: (ctx.zero, ctx.zero), b[-1]: (ctx.one, ctx.zero)}
        half = ctx.one / 2
        for j in range(1, m - 1):
            # b[1] is the apex; the rest are equally spaced towards b[-1]
            frac = ctx.mpf(j - 1) / (m - 2)
            pos[b[j]] = (half + frac * half, -depth * (1 - frac))
        to_v = {b[0]: (b[0], b[-1])}
        to_v.update({b[i]: b[i:] for i in range(1, m)})
        to_u = {b[i]: tuple(reversed(b[: i + 1])) for i in range(m)}
        pairs = {(x, y): _sub_path(b, x, y) for x in b for y in b if x != y}
        return LayoutRecord(Kind.CYCLE, t, alpha, pos, Witnesses(to_v, to_u, pairs))

    # -- edge uv present --------------------------------------------------------

    def case_a(self, tree: DecompositionTree, alpha) -> LayoutRecord:
        ctx = self.ctx
        t = tree.triple
        u, v = t.u, t.v
        dec = tree.case_a
        k = dec.k
        joints = dec.joints
        first = self.build(tree.children[0], alpha / 2)
        top = first.triple.tau
        pos = dict(first.positions)
        tan_a = ctx.tan(alpha)
        radius = self._eps_star(first)
        lowest = self._depth(first.positions)

        if k == 1:
            a2, at = top[1], top[-1]
            terms = [radius, lowest, tan_a * self.dist(pos[top[0]], pos[a2]), tan_a * self.dist(pos[a2], pos[at])]
            corner, far = a2, at
        else:
            terms = [radius, tan_a * self.dist(pos[top[0]], pos[top[-1]])]
            if first.kind is not Kind.TRIVIAL:
                terms.insert(1, lowest)
            corner, far = top[-1], top[0]
        sag = min(x for x in terms if x is not None) / 2
        scale = span(first.positions, ctx)
        self._resolved("sag", sag, scale)

        cx, cy = pos[corner]
        pos[corner] = (cx, cy - sag)
        fx, fy = pos[far]
        ncy = cy - sag
        for z in top[1:-1] if k > 1 else top[2:-1]:
            x = pos[z][0]
            pos[z] = (x, ncy + (x - cx) * (fy - ncy) / (fx - cx))

        eff = _sagged_witnesses(first.witnesses, top)
        layers = [(set(first.positions), top, eff)]
        children = [first]
        roles = ["half"]
        budget = dict(perturbation_radius=radius, lowest_depth=lowest, sag=sag)
        junctions: list[Junction] = []

        if k > 1:
            slope = alpha / 2
            cs, sn = ctx.cos(slope), ctx.sin(slope)
            ux, uy = pos[joints[1]]
            reach = sag / sn
            step = reach / (k - 1)
            end = (ux + sag / ctx.tan(slope), ctx.zero)
            world = {joints[i]: (ux + (i - 1) * step * cs, uy + (i - 1) * step * sn) for i in range(2, k)}
            world[v] = end
            third = alpha / 3
            for i in range(1, k):
                rec = self.build(tree.children[i], third)
                a_, b_ = joints[i], joints[i + 1]
                length = rec.positions[b_][0]
                f = step / length
                ox, oy = pos[a_]
                for z, (x, y) in rec.positions.items():
                    if z in world or z == a_:
                        continue
                    pos[z] = (ox + f * (cs * x - sn * y), oy + f * (sn * x + cs * y))
                if b_ in world:
                    pos[b_] = world[b_]
                layers.append((set(rec.positions), rec.triple.tau, rec.witnesses))
                children.append(rec)
                roles.append("third")
            budget.update(chain_slope=slope)
            self._resolved("chain step", step, span(pos, ctx))
            side = (ctx.pi + alpha) / 2
            for l in range(1, k):
                later = sorted({x for _, (vs, _, _) in enumerate(layers[l:]) for x in vs} - {joints[l]})
                top_path = _join(*(layers[m][1] for m in range(l, k)))
                low_path = t.beta[t.beta.index(joints[l]):]
                junctions.append(Junction(joints[l], side, "right", tuple(later), (top_path, low_path)))

        chain = _Chain(joints, layers)
        verts = list(pos)
        to_v = {x: ((u, v) if x == u else chain.right(x)) for x in verts}
        to_u = {}
        for x in verts:
            if x == u:
                to_u[x] = (u,)
            elif x == v and k > 1:
                to_u[x] = (v, u)
            else:
                to_u[x] = chain.left(x)
        pairs = {(x, y): chain.pair(x, y) for x in verts for y in verts if x != y}
        return LayoutRecord(
            Kind.CASE_A, t, alpha, pos, Witnesses(to_v, to_u, pairs),
            LayoutBudget(**budget), tuple(children), tuple(roles), tuple(junctions),
        )

    # -- edge uv absent -----------------------------------------------------------

    def case_b(self, tree: DecompositionTree, alpha) -> LayoutRecord:
        ctx = self.ctx
        t = tree.triple
        u, v = t.u, t.v
        dec = tree.case_b
        y1, yl = dec.y1, dec.y_ell
        hrec = self.build(tree.children[0], alpha / 2)
        pos = dict(hrec.positions)
        low_h = dec.h_triple.beta
        min_slope = min(
            ctx.atan2(pos[b][1] - pos[a][1], pos[b][0] - pos[a][0])
            for a, b in zip(low_h[1:-1], low_h[2:])
        )
        lx, ly = pos[yl]
        rise = -ly
        run = abs(pos[y1][0] - lx)
        wedge = min(min_slope, ctx.atan(rise / (3 * rise + 3 * run))) / 2
        cs, sn = ctx.cos(wedge), ctx.sin(wedge)
        vx = lx + rise / ctx.tan(wedge)
        pos[v] = (vx, ctx.zero)
        gap = vx - pos[y1][0]
        lowest = self._depth(hrec.positions)
        radius = min(gap / 3, lowest / 2)
        child_alpha = wedge / 2
        offset = rise / sn - radius
        scale = span(pos, ctx)
        for name, val in (("wedge angle", wedge * scale), ("gap to v", gap), ("disk radius", radius)):
            self._resolved(name, val, scale)

        chain_dec = dec.chain
        joints = chain_dec.joints
        k = chain_dec.k
        step = radius / k
        world = {joints[i]: (vx - (k - i) * step * cs, -(k - i) * step * sn) for i in range(1, k)}
        world[v] = pos[v]
        layers = []
        children = [hrec]
        roles = ["half"]
        for i in range(k):
            rec = self.build(tree.children[1 + i], child_alpha)
            a_, b_ = joints[i], joints[i + 1]
            length = rec.positions[b_][0]
            f = step / length
            ox, oy = world[b_]
            for z, (x, y) in rec.positions.items():
                if z in world or z == a_:
                    continue
                x = x - length
                pos[z] = (ox + f * (cs * x - sn * y), oy + f * (sn * x + cs * y))
            for z in (a_, b_):
                if z in world:
                    pos[z] = world[z]
            layers.append((set(rec.positions), rec.triple.tau, rec.witnesses))
            children.append(rec)
            roles.append("chain")
        self._resolved("chain step", step * (child_alpha if k else 1), span(pos, ctx))

        chain = _Chain(joints, layers)
        hset = set(hrec.positions)
        cset = set(chain.where)
        hw = hrec.witnesses
        top_h = dec.h_triple.tau
        verts = list(pos)
        to_v, to_u = {}, {}
        for x in verts:
            if x in hset:
                to_v[x] = hw.to_v[x] + (v,)
                to_u[x] = hw.to_u[x]
            else:
                to_v[x] = chain.right(x)
                to_u[x] = _join(chain.left(x), hw.to_u[yl])
        pairs = {}
        for x in verts:
            for y in verts:
                if x == y:
                    continue
                if x in hset and y in hset:
                    p = hw.pairs[(x, y)]
                elif x in cset and y in cset:
                    p = chain.pair(x, y)
                elif x in hset:
                    head = (top_h if x == u else hw.to_v[x]) + (v,)
                    p = head if y == v else _join(head, chain.pair(v, y))
                else:
                    p = _join(chain.left(x), hw.pairs[(yl, y)])
                pairs[(x, y)] = p

        junctions = (
            Junction(y1, (ctx.pi + alpha) / 2, "left", tuple(sorted(hset - {y1})),
                     (tuple(reversed(dec.h_triple.tau)), tuple(reversed(dec.h_triple.beta)))),
            Junction(yl, ctx.pi / 2, "right", tuple(sorted(cset - {yl})),
                     (_join(*(lay[1] for lay in layers)), t.beta[t.beta.index(yl):])),
        )
        budget = LayoutBudget(
            lowest_depth=lowest, min_lower_slope=min_slope, wedge_angle=wedge, disk_radius=radius,
            u_offset=offset, child_alpha=child_alpha, gap_to_v=gap,
        )
        return LayoutRecord(
            Kind.CASE_B, t, alpha, pos, Witnesses(to_v, to_u, pairs), budget,
            tuple(children), tuple(roles), junctions,
        )


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def _number_text(x: Number) -> str:
    if isinstance(x, str):
        text = x.strip()
    elif isinstance(x, float):
        text = repr(x)
    else:
        text = str(x)
    mpmath.mpf(text)  # rejects malformed input early
    return text


def precision_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if not raw:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV} must be an integer number of bits, got {raw!r}") from None
    if cap < 53:
        raise ValueError(f"{CAP_ENV} must be at least 53")
    return cap


def _draw_at(t: ScgTriple, tree: DecompositionTree, alpha: str, delta: str, precision: int) -> Drawing:
    ctx = mpmath.MPContext()
    ctx.prec = precision
    a = ctx.mpf(alpha)
    d = ctx.mpf(delta)
    if not 0 < a < ctx.pi / 4:
        raise ValueError(f"alpha must satisfy 0 < alpha < pi/4, got {alpha}")
    if d < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    builder = _Builder(ctx)
    rec = builder.build(tree, a)
    if tree.kind is not Kind.TRIVIAL:
        radius = builder._eps_star(rec)
        builder._resolved("perturbation radius of the drawing", radius, span(rec.positions, ctx))
    pos = dict(rec.positions)
    if d:
        x, y = pos[t.u]
        pos[t.u] = (x - d, y)
    return Drawing(t.graph, t.u, t.v, pos, alpha, delta, precision, rec.witnesses, rec)


def draw(
    t: ScgTriple,
    alpha: Number = "0.5",
    delta: Number = "0",
    *,
    precision: int = DEFAULT_PRECISION,
    cap: Optional[int] = None,
    tree: Optional[DecompositionTree] = None,
) -> Drawing:
    """Draw ``t`` with angle parameter ``alpha`` and ``u`` moved left by ``delta``.

    Starts at ``precision`` bits and doubles on :class:`PrecisionExhausted` up
    to ``cap`` (default: ``GREEDYDRAW_PRECISION_CAP`` or 4096).
    """
    alpha_t, delta_t = _number_text(alpha), _number_text(delta)
    cap = precision_cap() if cap is None else cap
    tree = build_tree(t) if tree is None else tree
    tried: list[int] = []
    p = precision
    while True:
        tried.append(p)
        try:
            return _draw_at(t, tree, alpha_t, delta_t, p)
        except PrecisionExhausted as exc:
            if p >= cap:
                raise PrecisionExhausted(exc.reason, p, cap, tuple(tried)) from exc
            p = min(2 * p, cap)


def _require(t: ScgTriple, kind: Kind, k_test=None) -> None:
    got = classify(t)
    if got is not kind:
        raise ValueError(f"triple is {got.value}, expected {kind.value}")


def draw_cycle(t: ScgTriple, alpha: Number = "0.5", delta: Number = "0", **kw) -> Drawing:
    _require(t, Kind.CYCLE)
    return draw(t, alpha, delta, **kw)


def draw_case_a_single(t: ScgTriple, alpha: Number = "0.5", delta: Number = "0", **kw) -> Drawing:
    tree = build_tree(t)
    _require(t, Kind.CASE_A)
    if tree.case_a.k != 1:
        raise ValueError("G - uv has more than one block")
    return draw(t, alpha, delta, tree=tree, **kw)


def draw_case_a_chain(t: ScgTriple, alpha: Number = "0.5", delta: Number = "0", **kw) -> Drawing:
    tree = build_tree(t)
    _require(t, Kind.CASE_A)
    if tree.case_a.k < 2:
        raise ValueError("G - uv is a single block")
    return draw(t, alpha, delta, tree=tree, **kw)


def draw_case_b(t: ScgTriple, alpha: Number = "0.5", delta: Number = "0", **kw) -> Drawing:
    _require(t, Kind.CASE_B)
    return draw(t, alpha, delta, **kw)


def eps_star(d: Drawing):
    return _eps_star(d.positions, d.graph.edges, d.context())


def shift_u_left(d: Drawing, delta: Number) -> Drawing:
    ctx = d.context()
    amount = ctx.mpf(_number_text(delta))
    if amount < 0:
        raise ValueError("shift must be non-negative")
    pos = dict(d.positions)
    x, y = pos[d.u]
    pos[d.u] = (x - amount, y)
    total = ctx.mpf(d.delta) + amount
    return replace(d, positions=pos, delta=mpmath.nstr(total, mpmath.libmp.repr_dps(d.precision)))


def transform(d: Drawing, scale: Number = 1, rotate: Number = 0, translate: tuple[Number, Number] = (0, 0)) -> Drawing:
    """Similarity transform: scale about the origin, rotate counter-clockwise, then translate."""
    ctx = d.context()
    f = ctx.mpf(_number_text(scale))
    if not f > 0:
        raise ValueError("scale must be positive")
    th = ctx.mpf(_number_text(rotate))
    cs, sn = ctx.cos(th), ctx.sin(th)
    tx, ty = (ctx.mpf(_number_text(c)) for c in translate)
    pos = {
        z: (tx + f * (cs * x - sn * y), ty + f * (sn * x + cs * y))
        for z, (x, y) in d.positions.items()
    }
    return replace(d, positions=pos, record=None)
