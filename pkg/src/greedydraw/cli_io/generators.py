"""Corpus generators producing embedded 3-connected planar graphs."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Union

import networkx as nx

from greedydraw.plane_graph import PlaneGraph

FAMILIES = ("wheel", "prism", "cycle", "platonic", "random3c")
SOLIDS = {
    "tetra": nx.tetrahedral_graph,
    "cube": nx.cubical_graph,
    "octa": nx.octahedral_graph,
    "dodeca": nx.dodecahedral_graph,
    "icosa": nx.icosahedral_graph,
}


class BadSpec(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: Union[int, str]
    seed: Optional[int] = None


def generate(spec: GeneratorSpec) -> PlaneGraph:
    fam = spec.family
    if fam not in FAMILIES:
        raise BadSpec(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")
    if fam == "platonic":
        if spec.n not in SOLIDS:
            raise BadSpec(f"platonic solid must be one of {', '.join(SOLIDS)}")
        return platonic(str(spec.n))
    try:
        n = int(spec.n)
    except (TypeError, ValueError):
        raise BadSpec(f"size must be an integer for family {fam}") from None
    if fam == "wheel":
        return wheel(n)
    if fam == "prism":
        return prism(n)
    if fam == "cycle":
        return cycle(n)
    return random3c(n, 0 if spec.seed is None else spec.seed)


# ---------------------------------------------------------------------------
# Geometric families: rotation read off a convex reference drawing
# ---------------------------------------------------------------------------


def _from_coordinates(coords: dict[int, tuple[float, float]], edges, hull: list[int]) -> PlaneGraph:
    """Rotation system of a straight-line drawing; ``hull`` lists the outer cycle counter-clockwise."""
    nbrs: dict[int, list[int]] = {v: [] for v in coords}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    rot = {}
    for v, ns in nbrs.items():
        x, y = coords[v]
        rot[v] = tuple(sorted(ns, key=lambda w: -math.atan2(coords[w][1] - y, coords[w][0] - x)))
    # clockwise outer walk: from hull[0] back to the previous hull vertex
    return PlaneGraph(rot, (hull[0], hull[-1]))


def _ring(n: int, radius: float, start: int) -> dict[int, tuple[float, float]]:
    return {
        start + i: (radius * math.cos(2 * math.pi * i / n), radius * math.sin(2 * math.pi * i / n))
        for i in range(n)
    }


def wheel(n: int) -> PlaneGraph:
    """Hub ``0`` joined to a rim cycle ``1..n``."""
    if n < 3:
        raise BadSpec("wheel needs n >= 3 rim vertices")
    coords = {0: (0.0, 0.0), **_ring(n, 1.0, 1)}
    rim = list(range(1, n + 1))
    edges = [(0, r) for r in rim] + [(rim[i], rim[(i + 1) % n]) for i in range(n)]
    return _from_coordinates(coords, edges, rim)


def prism(n: int) -> PlaneGraph:
    """Two ``n``-cycles ``0..n-1`` (outer) and ``n..2n-1`` (inner) joined by a matching."""
    if n < 3:
        raise BadSpec("prism needs n >= 3")
    coords = {**_ring(n, 2.0, 0), **_ring(n, 1.0, n)}
    edges = []
    for i in range(n):
        j = (i + 1) % n
        edges += [(i, j), (n + i, n + j), (i, n + i)]
    return _from_coordinates(coords, edges, list(range(n)))


def cycle(n: int) -> PlaneGraph:
    if n < 3:
        raise BadSpec("cycle needs n >= 3")
    return _from_coordinates(_ring(n, 1.0, 0), [(i, (i + 1) % n) for i in range(n)], list(range(n)))


def platonic(name: str) -> PlaneGraph:
    g = SOLIDS[name]()
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise BadSpec(f"{name} is not planar")
    rot = {v: tuple(emb.neighbors_cw_order(v)) for v in g}
    first = min(rot)
    return PlaneGraph(rot, (first, rot[first][0]))


# ---------------------------------------------------------------------------
# Random 3-connected planar graphs
# ---------------------------------------------------------------------------


def _stellate(rot: dict[int, list[int]], face: list[tuple[int, int]], new: int, picks: list[int]) -> None:
    """Put ``new`` inside ``face`` and join it to the face corners listed in ``picks``."""
    for i in picks:
        a, b = face[i - 1][0], face[i][0]
        c = face[i][1]
        ns = rot[b]
        # the corner of the face at b sits between a and its clockwise successor c
        ns.insert(ns.index(a) + 1, new)
        assert ns[(ns.index(new) + 1) % len(ns)] == c
    # corners appear counter-clockwise around an interior point
    rot[new] = [face[i][0] for i in reversed(picks)]


def _split(rot: dict[int, list[int]], v: int, new: int, lo: int, hi: int) -> None:
    """Split ``v``: neighbours at rotation positions ``lo..hi`` (cyclic) move to ``new``."""
    ns = rot[v]
    d = len(ns)
    count = (hi - lo) % d + 1
    moved = [ns[(lo + i) % d] for i in range(count)]
    # the remaining neighbours keep their clockwise order, new takes the moved slot
    kept = [ns[(hi + 1 + i) % d] for i in range(d - count)]
    rot[v] = kept + [new]
    rot[new] = moved + [v]
    for w in moved:
        rw = rot[w]
        rw[rw.index(v)] = new


def random3c(n: int, seed: int) -> PlaneGraph:
    """Grow a 3-connected plane graph on ``n`` vertices from K4.

    Each step either places a new vertex in a face joined to at least three of
    its corners, or splits a vertex of degree >= 4 into two adjacent vertices of
    degree >= 3.  Both operations keep the graph 3-connected and plane.
    """
    if n < 4:
        raise BadSpec("random3c needs n >= 4")
    rng = random.Random(seed)
    rot: dict[int, list[int]] = {0: [1, 2, 3], 1: [0, 3, 2], 2: [0, 1, 3], 3: [0, 2, 1]}
    nxt = 4
    while nxt < n:
        g = PlaneGraph({v: tuple(ns) for v, ns in rot.items()}, (0, rot[0][0]))
        splittable = [v for v in sorted(rot) if len(rot[v]) >= 4]
        if splittable and rng.random() < 0.5:
            v = rng.choice(splittable)
            d = len(rot[v])
            size = rng.randint(2, d - 2)
            lo = rng.randrange(d)
            _split(rot, v, nxt, lo, (lo + size - 1) % d)
        else:
            face = rng.choice(g.faces)
            m = len(face)
            k = rng.randint(3, m)
            picks = sorted(rng.sample(range(m), k))
            _stellate(rot, face, nxt, picks)
        nxt += 1
    final = PlaneGraph({v: tuple(ns) for v, ns in rot.items()}, (0, rot[0][0]))
    return final
