"""SVG rendering of drawings (display only; nothing reads these files back)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional
from xml.sax.saxutils import escape

import mpmath

from greedydraw.layout import Drawing
from greedydraw.plane_graph import boundary_paths


@dataclass(frozen=True)
class SvgOptions:
    size: int = 800  # width of the image in user units
    margin: float = 0.05  # fraction of the drawing's extent
    labels: bool = True
    outer_paths: bool = False  # highlight the two outer paths between u and v
    baseline: bool = False  # draw the horizontal line through u
    digits: int = 12


def render_svg(d: Drawing, options: Optional[SvgOptions] = None, labels: Optional[dict[int, str]] = None) -> str:
    opt = options or SvgOptions()
    fmt = lambda x: mpmath.nstr(x, opt.digits)  # noqa: E731
    xs = [p[0] for p in d.positions.values()]
    ys = [-p[1] for p in d.positions.values()]  # SVG's y axis points down
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    extent = max(hi_x - lo_x, hi_y - lo_y) or mpmath.mpf(1)
    pad = extent * opt.margin
    vb = (lo_x - pad, lo_y - pad, hi_x - lo_x + 2 * pad, hi_y - lo_y + 2 * pad)
    radius = extent / 80
    stroke = extent / 400

    def xy(z):
        x, y = d.positions[z]
        return fmt(x), fmt(-y)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{opt.size}" '
        f'viewBox="{" ".join(fmt(c) for c in vb)}">',
    ]
    if opt.baseline:
        y = fmt(-d.positions[d.u][1])
        out.append(
            f'<line class="baseline" x1="{fmt(vb[0])}" y1="{y}" x2="{fmt(vb[0] + vb[2])}" y2="{y}" '
            f'stroke="#999" stroke-dasharray="{fmt(4 * stroke)}" stroke-width="{fmt(stroke)}"/>'
        )
    for a, b in d.graph.edges:
        (x1, y1), (x2, y2) = xy(a), xy(b)
        out.append(f'<line class="edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#222" stroke-width="{fmt(stroke)}"/>')
    if opt.outer_paths and len(d.positions) > 2:
        walk = list(d.graph.outer_walk)
        pts = " ".join(",".join(xy(z)) for z in walk + walk[:1])
        out.append(f'<polyline class="outer" points="{pts}" fill="none" stroke="#888" stroke-width="{fmt(2 * stroke)}"/>')
        bp = boundary_paths(d.graph, d.u, d.v)
        for cls, path, colour in (("tau", bp.tau, "#d33"), ("beta", bp.beta, "#36c")):
            pts = " ".join(",".join(xy(z)) for z in path)
            out.append(
                f'<polyline class="{cls}" points="{pts}" fill="none" stroke="{colour}" stroke-width="{fmt(3 * stroke)}"/>'
            )
    for z in sorted(d.positions):
        x, y = xy(z)
        out.append(f'<circle cx="{x}" cy="{y}" r="{fmt(radius)}" fill="#fff" stroke="#222" stroke-width="{fmt(stroke)}"/>')
        if opt.labels:
            text = escape((labels or {}).get(z, str(z)))
            out.append(
                f'<text x="{x}" y="{y}" font-size="{fmt(radius)}" text-anchor="middle" '
                f'dominant-baseline="central">{text}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
