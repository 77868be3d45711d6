"""Exact predicates on drawings whose coordinates are binary floating-point values.

Every finite ``mpf`` is a dyadic rational, so a whole drawing can be moved onto
a common integer grid without rounding.  Polynomial predicates (orientation,
squared distances, comparisons) are then evaluated exactly with Python ints.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

import mpmath

Point = tuple  # (mpf, mpf)
GridPoint = tuple[int, int]


class DegenerateDrawing(ValueError):
    pass


def _parts(c) -> tuple[int, int]:
    sign, man, exp, _ = c._mpf_
    if man == 0 and exp != 0:
        raise DegenerateDrawing(f"non-finite coordinate {c}")
    return (-man if sign else man), exp


def to_grid(points: Mapping[int, Point]) -> tuple[dict[int, GridPoint], int]:
    """Integers ``X, Y`` and a shared exponent ``e`` with ``x = X * 2**e`` exactly."""
    raw = {v: (_parts(x), _parts(y)) for v, (x, y) in points.items()}
    exps = [e for pair in raw.values() for (m, e) in pair if m]
    e0 = min(exps) if exps else 0
    grid = {v: tuple((m << (e - e0)) if m else 0 for (m, e) in pair) for v, pair in raw.items()}
    return grid, e0


def orient(a: GridPoint, b: GridPoint, c: GridPoint) -> int:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def dist2(a: GridPoint, b: GridPoint) -> int:
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


def point_segment_dist2(p: GridPoint, a: GridPoint, b: GridPoint) -> tuple[int, int]:
    """Squared distance from ``p`` to segment ``ab`` as a fraction ``(num, den)``."""
    ex, ey = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    t = px * ex + py * ey
    if t <= 0:
        return px * px + py * py, 1
    length2 = ex * ex + ey * ey
    if t >= length2:
        return dist2(p, b), 1
    cross = ex * py - ey * px
    return cross * cross, length2


def _less(f: tuple[int, int], g: tuple[int, int]) -> bool:
    return f[0] * g[1] < g[0] * f[1]


def eps_star(
    points: Mapping[int, Point],
    edges: Iterable[tuple[int, int]],
    ctx=mpmath.mp,
    steps: Optional[Iterable[tuple[int, int, int]]] = None,
):
    """Perturbation radius of a planar straight-line drawing.

    ``min(feature / 3, gap / 5)`` where ``feature`` is the smallest distance
    between a vertex and another vertex or a non-incident edge, and ``gap`` is
    the smallest positive difference ``d(a, z) - d(b, z)`` over distinct
    ``a, b, z``.  For a planar drawing the distance between two non-adjacent
    edges is attained at an endpoint, so it is already covered by the
    vertex-edge terms.  Empty minima count as infinity.

    With ``steps`` the gap only ranges over the given triples ``(a, b, z)``,
    each of which must satisfy ``d(a, z) > d(b, z)``; this is the radius that
    keeps a known family of distance-decreasing paths intact.
    """
    grid, e0 = to_grid(points)
    verts = sorted(grid)
    best = _closest_feature(grid, verts, edges)
    inf = ctx.inf
    with ctx.extraprec(32):
        feature = ctx.sqrt(ctx.mpf(best[0]) / best[1]) if best else inf
        if steps is None:
            gap = _all_gaps(grid, verts, ctx)
        else:
            gap = _step_gaps(grid, steps, ctx)
        out = min(feature / 3, gap / 5)
        if out == inf:
            return out
        out = ctx.ldexp(out, e0)
    return +out


def _closest_feature(grid, verts, edges) -> Optional[tuple[int, int]]:
    best = None
    for i, a in enumerate(verts):
        pa = grid[a]
        for b in verts[i + 1:]:
            d = dist2(pa, grid[b])
            if d == 0:
                raise DegenerateDrawing(f"vertices {a} and {b} coincide")
            if best is None or d * best[1] < best[0]:
                best = (d, 1)
    for a, b in edges:
        pa, pb = grid[a], grid[b]
        lo_x, hi_x = min(pa[0], pb[0]), max(pa[0], pb[0])
        lo_y, hi_y = min(pa[1], pb[1]), max(pa[1], pb[1])
        for w in verts:
            if w == a or w == b:
                continue
            p = grid[w]
            if best is not None:
                # cheap box rejection: a coordinate gap already exceeds the best distance
                gx = max(lo_x - p[0], p[0] - hi_x, 0)
                gy = max(lo_y - p[1], p[1] - hi_y, 0)
                g2 = gx * gx + gy * gy
                if g2 * best[1] >= best[0]:
                    continue
            d = point_segment_dist2(p, pa, pb)
            if d[0] == 0:
                raise DegenerateDrawing(f"vertex {w} lies on edge {a}-{b}")
            if best is None or _less(d, best):
                best = d
    return best


def _all_gaps(grid, verts, ctx):
    gap = ctx.inf
    for z in verts:
        pz = grid[z]
        ds = sorted({dist2(pz, grid[w]) for w in verts if w != z})
        for s1, s2 in zip(ds, ds[1:]):
            g = ctx.mpf(s2 - s1) / (ctx.sqrt(s1) + ctx.sqrt(s2))
            if g < gap:
                gap = g
    return gap


def _step_gaps(grid, steps, ctx):
    # the minimum is located at low precision, then recomputed at full precision
    low = mpmath.MPContext()
    low.prec = 64
    best, arg = low.inf, None
    for a, b, z in set(steps):
        far, near = dist2(grid[a], grid[z]), dist2(grid[b], grid[z])
        if far <= near:
            raise DegenerateDrawing(f"step {a}->{b} does not approach {z}")
        g = low.mpf(far - near) / (low.sqrt(far) + low.sqrt(near))
        if g < best:
            best, arg = g, (far, near)
    if arg is None:
        return ctx.inf
    far, near = arg
    # the low-precision search may be off by a relative 2**-60; absorb it
    exact = ctx.mpf(far - near) / (ctx.sqrt(far) + ctx.sqrt(near))
    return min(exact, ctx.mpf(best)) * (1 - ctx.ldexp(1, -50))


def span(points: Mapping[int, Point], ctx=mpmath.mp):
    """Largest absolute coordinate."""
    m = ctx.zero
    for x, y in points.values():
        m = max(m, abs(x), abs(y))
    return m
