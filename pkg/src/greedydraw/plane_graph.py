"""Combinatorial plane graphs and their connectivity structure.

A plane graph is stored as a rotation system: for every vertex the clockwise
cyclic order of its neighbours, plus one dart ``(tail, head)`` lying on the
outer face.  Faces are traced with the rule "arrive at ``v`` from ``u``, leave
towards the clockwise successor of ``u`` around ``v``".  With that rule every
face lies to the left of its darts, so the outer face walk runs clockwise
around the drawing.

Besides the embedding kernel this module holds the purely graph-theoretic
helpers used by the decomposition: blocks and cut vertices, separation
pairs, split components of a pair, and bridges of a subgraph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Optional, Union

VertexId = int
Dart = tuple[int, int]
Edge = tuple[int, int]


class PlaneGraphError(ValueError):
    pass


class NonPlanarRotation(PlaneGraphError):
    pass


class Disconnected(PlaneGraphError):
    pass


class NotExternal(PlaneGraphError):
    pass


class NotACut(PlaneGraphError):
    pass


def edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


# ---------------------------------------------------------------------------
# Abstract graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph given by adjacency sets (treated as immutable)."""

    adjacency: Mapping[int, frozenset[int]]

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> "Graph":
        adj: dict[int, set[int]] = {v: set() for v in vertices}
        for a, b in edges:
            if a == b:
                raise PlaneGraphError(f"self-loop at {a}")
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return cls({v: frozenset(ns) for v, ns in adj.items()})

    @cached_property
    def vertices(self) -> list[int]:
        return sorted(self.adjacency)

    @cached_property
    def edges(self) -> list[Edge]:
        return sorted({edge_key(a, b) for a, ns in self.adjacency.items() for b in ns})

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def __len__(self) -> int:
        return len(self.adjacency)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adjacency.get(a, ())

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def without(self, removed: Iterable[int]) -> "Graph":
        gone = set(removed)
        return Graph({v: frozenset(ns - gone) for v, ns in self.adjacency.items() if v not in gone})

    def edge_subgraph(self, edges: Iterable[Edge], vertices: Iterable[int] = ()) -> "Graph":
        return Graph.from_edges(edges, vertices)

    def is_connected(self) -> bool:
        return len(components(self)) <= 1


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    seen: set[int] = set()
    out: list[list[int]] = []
    for s in g.vertices:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        out.append(sorted(comp))
    return out


# ---------------------------------------------------------------------------
# Plane graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PlaneGraph:
    """Connected simple graph with a rotation system and an outer dart."""

    rotation: Mapping[int, tuple[int, ...]]
    outer_dart: Dart

    def __post_init__(self) -> None:
        rot = {v: tuple(ns) for v, ns in self.rotation.items()}
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "outer_dart", tuple(self.outer_dart))
        for v, ns in rot.items():
            if len(set(ns)) != len(ns):
                raise PlaneGraphError(f"rotation at {v} repeats a neighbour")
            for w in ns:
                if w == v:
                    raise PlaneGraphError(f"self-loop at {v}")
                if w not in rot or v not in rot[w]:
                    raise PlaneGraphError(f"rotation inconsistent: {w} in rotation({v}) but not vice versa")
        a, b = self.outer_dart
        if a not in rot or b not in rot[a]:
            raise PlaneGraphError(f"outer dart {self.outer_dart} is not a dart of the graph")
        # tracing validates connectivity and the Euler count eagerly
        self.faces

    # -- basic views --------------------------------------------------------

    @cached_property
    def graph(self) -> Graph:
        return Graph({v: frozenset(ns) for v, ns in self.rotation.items()})

    @property
    def vertices(self) -> list[int]:
        return self.graph.vertices

    @property
    def edges(self) -> list[Edge]:
        return self.graph.edges

    def has_edge(self, a: int, b: int) -> bool:
        return self.graph.has_edge(a, b)

    @cached_property
    def _position(self) -> dict[int, dict[int, int]]:
        return {v: {w: i for i, w in enumerate(ns)} for v, ns in self.rotation.items()}

    def successor(self, v: int, w: int) -> int:
        """Clockwise successor of neighbour ``w`` around ``v``."""
        ns = self.rotation[v]
        return ns[(self._position[v][w] + 1) % len(ns)]

    def predecessor(self, v: int, w: int) -> int:
        ns = self.rotation[v]
        return ns[(self._position[v][w] - 1) % len(ns)]

    def next_dart(self, dart: Dart) -> Dart:
        u, v = dart
        return (v, self.successor(v, u))

    # -- faces ----------------------------------------------------------------

    @cached_property
    def faces(self) -> list[list[Dart]]:
        return trace_faces(self)

    @cached_property
    def outer_face(self) -> list[Dart]:
        return face_of(self, self.outer_dart)

    @cached_property
    def outer_walk(self) -> list[int]:
        """Vertices of the outer face in clockwise order, starting at the outer dart's tail."""
        return [d[0] for d in self.outer_face]

    @cached_property
    def outer_darts(self) -> frozenset[Dart]:
        return frozenset(self.outer_face)

    @cached_property
    def external_vertices(self) -> frozenset[int]:
        return frozenset(self.outer_walk)

    # -- derived embeddings ---------------------------------------------------

    def restrict(self, edges: Iterable[tuple[int, int]]) -> "PlaneGraph":
        """Sub-embedding on ``edges`` obtained by deleting everything else.

        Deleting edges only merges faces, so every surviving dart of the outer
        walk still borders the outer face; the smallest one is kept.
        """
        keep = {edge_key(a, b) for a, b in edges}
        if not keep:
            raise PlaneGraphError("empty edge set")
        verts = {x for e in keep for x in e}
        rot = {
            v: tuple(w for w in self.rotation[v] if edge_key(v, w) in keep)
            for v in verts
        }
        surviving = sorted(d for d in self.outer_face if edge_key(*d) in keep)
        if not surviving:
            raise PlaneGraphError("no outer dart survives the restriction")
        return PlaneGraph(rot, surviving[0])

    def with_edge(self, a: int, b: int, after_at_a: int, after_at_b: int, outer_dart: Optional[Dart] = None) -> "PlaneGraph":
        """Insert edge ``ab`` so that ``b`` follows ``after_at_a`` around ``a`` (and symmetrically)."""
        if self.has_edge(a, b):
            raise PlaneGraphError(f"edge {a}-{b} already present")
        rot = dict(self.rotation)
        for x, y, after in ((a, b, after_at_a), (b, a, after_at_b)):
            ns = list(rot[x])
            ns.insert(ns.index(after) + 1, y)
            rot[x] = tuple(ns)
        return PlaneGraph(rot, outer_dart or self.outer_dart)


def face_of(g: PlaneGraph, start: Dart) -> list[Dart]:
    walk = [start]
    d = g.next_dart(start)
    while d != start:
        walk.append(d)
        d = g.next_dart(d)
    return walk


def trace_faces(g: PlaneGraph) -> list[list[Dart]]:
    """All face walks of ``g``; raises if ``g`` is disconnected or not planar."""
    if not g.graph.is_connected():
        raise Disconnected("plane graph must be connected")
    seen: set[Dart] = set()
    faces: list[list[Dart]] = []
    for v in sorted(g.rotation):
        for w in g.rotation[v]:
            if (v, w) in seen:
                continue
            walk = face_of(g, (v, w))
            seen.update(walk)
            faces.append(walk)
    n, m = len(g.rotation), len(g.graph.edges)
    if n - m + len(faces) != 2:
        raise NonPlanarRotation(f"Euler check failed: V={n}, E={m}, F={len(faces)}")
    return faces


@dataclass(frozen=True)
class BoundaryPaths:
    tau: tuple[int, ...]
    beta: tuple[int, ...]


def boundary_paths(g: PlaneGraph, u: int, v: int) -> BoundaryPaths:
    """Clockwise (tau) and counter-clockwise (beta) outer paths from ``u`` to ``v``."""
    if u == v:
        raise ValueError("boundary paths need distinct endpoints")
    walk = g.outer_walk
    for x in (u, v):
        if x not in g.external_vertices:
            raise NotExternal(f"vertex {x} is not on the outer face")
    i = walk.index(u)
    cyc = walk[i:] + walk[:i]
    j = cyc.index(v)
    tau = tuple(cyc[: j + 1])
    beta = (u,) + tuple(reversed(cyc[j:]))
    return BoundaryPaths(tau, beta)


# ---------------------------------------------------------------------------
# Blocks and cut vertices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    vertices: frozenset[int]
    edges: frozenset[Edge]


@dataclass(frozen=True)
class BCTree:
    blocks: tuple[Block, ...]
    cut_vertices: frozenset[int]
    # (block index, cut vertex) incidences
    edges: tuple[tuple[int, int], ...]

    def blocks_containing(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b.vertices]


def _biconnected_edge_sets(g: Graph) -> list[set[Edge]]:
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out: list[set[Edge]] = []
    clock = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = clock
        clock += 1
        edge_stack: list[Edge] = []
        stack = [(root, -1, iter(sorted(g.adjacency[root])))]
        while stack:
            v, parent, it = stack[-1]
            pushed = False
            for w in it:
                if w not in disc:
                    disc[w] = low[w] = clock
                    clock += 1
                    edge_stack.append((v, w))
                    stack.append((w, v, iter(sorted(g.adjacency[w]))))
                    pushed = True
                    break
                if w != parent and disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if pushed:
                continue
            stack.pop()
            if not stack:
                continue
            p = stack[-1][0]
            low[p] = min(low[p], low[v])
            if low[v] >= disc[p]:
                comp: set[Edge] = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.add(edge_key(a, b))
                    if (a, b) == (p, v):
                        break
                out.append(comp)
    return out


def bc_tree(g: Graph) -> BCTree:
    """Block-cut tree of a connected graph."""
    if len(g) == 0 or not g.is_connected():
        raise Disconnected("bc_tree needs a connected, non-empty graph")
    edge_sets = _biconnected_edge_sets(g)
    if not edge_sets:
        blocks = [Block(frozenset(g.vertices), frozenset())]
    else:
        blocks = [Block(frozenset(x for e in es for x in e), frozenset(es)) for es in edge_sets]
    blocks.sort(key=lambda b: (min(b.vertices), sorted(b.edges)))
    count: dict[int, int] = {}
    for b in blocks:
        for x in b.vertices:
            count[x] = count.get(x, 0) + 1
    cuts = frozenset(x for x, c in count.items() if c > 1)
    incid = tuple((i, c) for i, b in enumerate(blocks) for c in sorted(b.vertices & cuts))
    return BCTree(tuple(blocks), cuts, incid)


def cut_vertices(g: Graph) -> frozenset[int]:
    return bc_tree(g).cut_vertices


def is_biconnected(g: Graph) -> bool:
    return len(g) >= 3 and g.is_connected() and not cut_vertices(g)


# ---------------------------------------------------------------------------
# Separation pairs and their components
# ---------------------------------------------------------------------------


def find_2cuts(g: Graph) -> list[Edge]:
    """All vertex pairs ``(a, b)``, ``a < b``, whose removal disconnects ``g``."""
    if is_biconnected(g):
        found: set[Edge] = set()
        for a in g.vertices:
            rest = g.without([a])
            if len(rest) < 3:
                continue
            for b in cut_vertices(rest):
                found.add(edge_key(a, b))
        return sorted(found)
    # not 2-connected: plain enumeration keeps the definition literal
    return sorted(
        (a, b) for a, b in combinations(g.vertices, 2)
        if len(components(g.without([a, b]))) > 1
    )


def ab_components(g: Graph, a: int, b: int) -> list[Graph]:
    """Split components of the pair ``{a, b}``.

    The edge ``ab`` (if present) forms the trivial component and comes first.
    Every connected component ``C`` of ``g - {a, b}`` yields the component made
    of the edges with at least one end in ``C``.
    """
    comps = components(g.without([a, b]))
    has_ab = g.has_edge(a, b)
    if len(comps) < 2 and not has_ab:
        raise NotACut(f"{{{a},{b}}} is neither a separation pair nor an edge")
    out: list[Graph] = []
    if has_ab:
        out.append(Graph.from_edges([(a, b)]))
    for comp in comps:
        cs = set(comp)
        edges = [e for e in g.edges if e[0] in cs or e[1] in cs]
        out.append(Graph.from_edges(edges, list(cs) + [a, b]))
    return out


# ---------------------------------------------------------------------------
# Bridges
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bridge:
    kind: str  # "trivial" or "non-trivial"
    vertices: frozenset[int]
    edges: frozenset[Edge]
    attachments: frozenset[int]

    @property
    def trivial(self) -> bool:
        return self.kind == "trivial"


@dataclass(frozen=True)
class BridgeSet:
    host: Graph
    bridges: tuple[Bridge, ...] = field(default_factory=tuple)


def bridges_of(g: Union[Graph, PlaneGraph], h: Graph) -> BridgeSet:
    """Bridges of ``g`` relative to the subgraph ``h`` (which may have isolated vertices)."""
    gg = g.graph if isinstance(g, PlaneGraph) else g
    hv = set(h.vertices)
    he = h.edge_set
    out: list[Bridge] = []
    for e in gg.edges:
        if e not in he and e[0] in hv and e[1] in hv:
            out.append(Bridge("trivial", frozenset(e), frozenset([e]), frozenset(e)))
    for comp in components(gg.without(hv)):
        cs = set(comp)
        edges = frozenset(e for e in gg.edges if e[0] in cs or e[1] in cs)
        att = frozenset(x for e in edges for x in e if x in hv)
        out.append(Bridge("non-trivial", frozenset(cs | att), edges, att))
    return BridgeSet(h, tuple(out))
