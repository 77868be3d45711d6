from __future__ import annotations

import math
import random
import sys
from functools import lru_cache

from hypothesis import HealthCheck, settings

from greedydraw.cli_io.generators import GeneratorSpec, generate
from greedydraw.cli_io.triple import prepare_triple
from greedydraw.decomposition import build_tree
from greedydraw.layout import draw
from greedydraw.plane_graph import Graph, PlaneGraph

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

WHEELS = [("wheel", n, 0) for n in range(4, 13)]
PRISMS = [("prism", n, 0) for n in range(3, 9)]
SOLIDS = [("platonic", s, 0) for s in ("tetra", "cube", "octa", "dodeca", "icosa")]
RANDOM = [("random3c", n, s) for n in (10, 20, 40) for s in range(5)]
CORPUS = WHEELS + PRISMS + SOLIDS + RANDOM
SMALL_CORPUS = WHEELS[:4] + PRISMS[:3] + SOLIDS + [("random3c", 10, s) for s in range(3)]


def corpus_id(case) -> str:
    return "-".join(str(x) for x in case)


@lru_cache(maxsize=None)
def triple_for(family, n, seed=0):
    return prepare_triple(generate(GeneratorSpec(family, n, seed)))


@lru_cache(maxsize=None)
def tree_for(family, n, seed=0):
    return build_tree(triple_for(family, n, seed))


@lru_cache(maxsize=None)
def drawing_for(family, n, seed=0, alpha="0.5", delta="0"):
    return draw(triple_for(family, n, seed), alpha, delta, tree=tree_for(family, n, seed))


# ---------------------------------------------------------------------------
# Random abstract graphs
# ---------------------------------------------------------------------------


def random_connected_graph(rng: random.Random, n: int, extra: float) -> Graph:
    """Random spanning tree plus each remaining pair with probability ``extra``."""
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < extra:
                edges.add((a, b))
    return Graph.from_edges(edges, range(n))


def embed(coords: dict[int, tuple[float, float]], edges, outer_dart) -> PlaneGraph:
    """Rotation system read off a straight-line drawing (clockwise = decreasing angle)."""
    nbrs: dict[int, list[int]] = {v: [] for v in coords}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    rot = {
        v: tuple(sorted(ns, key=lambda w: -math.atan2(coords[w][1] - coords[v][1], coords[w][0] - coords[v][0])))
        for v, ns in nbrs.items()
    }
    return PlaneGraph(rot, outer_dart)


def triangle_chain(k: int) -> PlaneGraph:
    """``k`` triangles hanging below a line, glued at joints, plus the edge from the first to the last joint."""
    coords = {0: (0.0, 0.0)}
    edges = []
    for i in range(k):
        apex, joint = 2 * i + 1, 2 * i + 2
        coords[apex] = (2 * i + 1.0, -2.0)
        coords[joint] = (2 * i + 2.0, -1.0 if i < k - 1 else 0.0)
        edges += [(2 * i, apex), (apex, joint), (2 * i, joint)]
    edges.append((0, 2 * k))
    return embed(coords, edges, (0, 2 * k))
