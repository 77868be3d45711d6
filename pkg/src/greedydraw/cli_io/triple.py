"""Choosing the root triple of a 3-connected plane graph."""

from __future__ import annotations

from greedydraw.decomposition import ScgTriple, require_scg
from greedydraw.plane_graph import PlaneGraph, cut_vertices, find_2cuts


class Not3Connected(ValueError):
    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(f"{message}: {list(witness)}")
        self.witness = witness


def prepare_triple(g: PlaneGraph) -> ScgTriple:
    """``u`` = smallest external vertex, ``v`` = its clockwise successor on the outer face."""
    gg = g.graph
    if len(gg) < 4:
        raise Not3Connected("fewer than four vertices", tuple(gg.vertices))
    cuts = cut_vertices(gg)
    if cuts:
        raise Not3Connected("cut vertex", (min(cuts),))
    pairs = find_2cuts(gg)
    if pairs:
        raise Not3Connected("separation pair", pairs[0])
    walk = g.outer_walk
    u = min(walk)
    v = walk[(walk.index(u) + 1) % len(walk)]
    return require_scg(g, u, v)
