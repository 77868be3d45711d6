"""Strong circuit graph triples and their recursive decomposition.

A triple ``(G, u, v)`` is either the single edge ``uv`` or a 2-connected plane
graph with ``u`` and ``v`` on the outer face satisfying the separation-pair
conditions checked by :func:`validate_scg`.  Non-leaf triples split in one
of two ways:

* edge ``uv`` present: ``G - uv`` is a chain of blocks from ``u`` to ``v``;
* edge ``uv`` absent: the block ``H`` of ``G - v`` containing ``u`` plus the
  bridges hanging between ``H`` and ``v``.

Every produced sub-triple is validated again; a failure raises
:class:`InternalContradiction` instead of being drawn.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from greedydraw.plane_graph import (
    Edge,
    Graph,
    PlaneGraph,
    ab_components,
    bc_tree,
    boundary_paths,
    bridges_of,
    cut_vertices,
    edge_key,
    find_2cuts,
)


class Kind(str, Enum):
    TRIVIAL = "Trivial"
    CYCLE = "Cycle"
    CASE_A = "CaseA"
    CASE_B = "CaseB"


class InternalContradiction(RuntimeError):
    """A structural guarantee of the decomposition did not hold."""


class InvalidTriple(ValueError):
    def __init__(self, violation: "Violation"):
        super().__init__(f"property ({violation.prop}): {violation.message}")
        self.violation = violation


@dataclass(frozen=True)
class Violation:
    prop: str
    message: str
    witness: tuple = ()

    def to_json(self) -> dict:
        return {"property": self.prop, "message": self.message, "witness": list(self.witness)}


@dataclass(frozen=True)
class Certificate:
    """Evidence gathered while validating a triple."""

    tau: tuple[int, ...]
    beta: tuple[int, ...]
    two_cuts: tuple[Edge, ...] = ()


@dataclass(frozen=True, eq=False)
class ScgTriple:
    graph: PlaneGraph
    u: int
    v: int
    certificate: Certificate

    @property
    def tau(self) -> tuple[int, ...]:
        return self.certificate.tau

    @property
    def beta(self) -> tuple[int, ...]:
        return self.certificate.beta

    @property
    def vertices(self) -> list[int]:
        return self.graph.vertices

    @property
    def kind(self) -> Kind:
        return classify(self)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_scg(g: PlaneGraph, u: int, v: int) -> Union[ScgTriple, Violation]:
    """Check the strong-circuit-graph conditions; never raises on bad input."""
    if u == v:
        return Violation("b", "u and v must be distinct", (u,))
    for x in (u, v):
        if x not in g.rotation:
            return Violation("b", f"vertex {x} is not in the graph", (x,))
    gg = g.graph
    if len(gg) == 2:
        if gg.has_edge(u, v):
            return ScgTriple(g, u, v, Certificate((u, v), (u, v)))
        return Violation("a", "two-vertex graph without the edge uv", (u, v))

    cuts = cut_vertices(gg)
    if cuts:
        return Violation("a", "graph is not 2-connected", (min(cuts),))
    ext = g.external_vertices
    for x in (u, v):
        if x not in ext:
            return Violation("b", f"vertex {x} is not external", (x,))
    paths = boundary_paths(g, u, v)
    if gg.has_edge(u, v) and paths.tau != (u, v):
        return Violation("c", "edge uv exists but is not the clockwise path from u to v", paths.tau)

    inner_beta = set(paths.beta[1:-1])
    two_cuts = find_2cuts(gg)
    for a, b in two_cuts:
        if a not in ext or b not in ext:
            return Violation("d", "separation pair with an internal vertex", (a, b))
        if a not in inner_beta and b not in inner_beta:
            return Violation("d", "separation pair with no vertex inside the counter-clockwise path", (a, b))
        for comp in ab_components(gg, a, b):
            if len(comp) == 2 and comp.edges == [edge_key(a, b)]:
                continue
            if not (set(comp.vertices) - {a, b}) & ext:
                return Violation("d", "split component without an external vertex", (a, b))
    return ScgTriple(g, u, v, Certificate(paths.tau, paths.beta, tuple(two_cuts)))


def require_scg(g: PlaneGraph, u: int, v: int) -> ScgTriple:
    res = validate_scg(g, u, v)
    if isinstance(res, Violation):
        raise InvalidTriple(res)
    return res


def _revalidate(g: PlaneGraph, u: int, v: int, what: str) -> ScgTriple:
    res = validate_scg(g, u, v)
    if isinstance(res, Violation):
        raise InternalContradiction(f"{what} ({u}, {v}) fails property ({res.prop}): {res.message} {res.witness}")
    return res


def classify(t: ScgTriple) -> Kind:
    g = t.graph.graph
    if len(g) == 2:
        return Kind.TRIVIAL
    if len(g.edges) == len(g):
        return Kind.CYCLE
    if g.has_edge(t.u, t.v):
        return Kind.CASE_A
    return Kind.CASE_B


# ---------------------------------------------------------------------------
# Edge present: chain of blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CaseADecomposition:
    layers: tuple[ScgTriple, ...]
    shared_vertices: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.layers)

    @property
    def joints(self) -> tuple[int, ...]:
        """``u_0, u_1, ..., u_k``."""
        return (self.layers[0].u,) + tuple(t.v for t in self.layers)


def _block_chain(parent: PlaneGraph, rest: Graph, u: int, v: int) -> CaseADecomposition:
    """Order the blocks of ``rest`` (a subgraph of ``parent``) into a path from ``u`` to ``v``."""
    tree = bc_tree(rest)
    blocks = tree.blocks
    cuts = tree.cut_vertices
    if u in cuts or v in cuts:
        raise InternalContradiction("an end of the block chain is a cut vertex")
    for c in cuts:
        if len(tree.blocks_containing(c)) != 2:
            raise InternalContradiction(f"cut vertex {c} lies in more than two blocks")
    start = tree.blocks_containing(u)
    if len(start) != 1:
        raise InternalContradiction("u is not in exactly one block")
    order = [start[0]]
    joints = [u]
    used = {start[0]}
    while True:
        cur = blocks[order[-1]]
        nxt = sorted((cur.vertices & cuts) - {joints[-1]})
        if not nxt:
            break
        if len(nxt) != 1:
            raise InternalContradiction("block-cut tree is not a path")
        c = nxt[0]
        other = [i for i in tree.blocks_containing(c) if i not in used]
        if len(other) != 1:
            raise InternalContradiction("block-cut tree is not a path")
        joints.append(c)
        order.append(other[0])
        used.add(other[0])
    if len(used) != len(blocks) or v not in blocks[order[-1]].vertices:
        raise InternalContradiction("block chain does not end at v")
    joints.append(v)
    layers = []
    for i, bi in enumerate(order):
        sub = parent.restrict(blocks[bi].edges)
        layers.append(_revalidate(sub, joints[i], joints[i + 1], f"layer {i + 1}"))
    dec = CaseADecomposition(tuple(layers), tuple(joints[1:-1]))
    _check_sharing(dec)
    return dec


def _check_sharing(dec: CaseADecomposition) -> None:
    sets = [set(t.vertices) for t in dec.layers]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            common = sets[i] & sets[j]
            want = {dec.layers[i].v} if j == i + 1 else set()
            if common != want:
                raise InternalContradiction(f"layers {i + 1} and {j + 1} share {sorted(common)}")


def decompose_case_a(t: ScgTriple) -> CaseADecomposition:
    if classify(t) is not Kind.CASE_A:
        raise ValueError(f"triple is {classify(t).value}, not CaseA")
    return _split_off_edge(t)


def _split_off_edge(t: ScgTriple) -> CaseADecomposition:
    g = t.graph
    rest = g.graph.edge_subgraph([e for e in g.edges if e != edge_key(t.u, t.v)])
    return _block_chain(g, rest, t.u, t.v)


# ---------------------------------------------------------------------------
# Edge absent: block H of G - v plus bridges at v
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CaseBDecomposition:
    h_triple: ScgTriple
    trivial_bridges: tuple[Edge, ...]  # (y_i, v), counter-clockwise around v from y_1
    chain: CaseADecomposition
    y1: int
    y_ell: int
    # "edge": the last bridge is the edge y_ell v, drawn as a single unit layer
    # "merged": edge y_ell v exists and joins the last bridge into one 2-connected layer
    # "blocks": the last bridge is split into its blocks (edge y_ell v only virtual)
    chain_mode: str
    closed_bridge: Optional[ScgTriple] = None


def decompose_case_b(t: ScgTriple) -> CaseBDecomposition:
    if classify(t) is not Kind.CASE_B:
        raise ValueError(f"triple is {classify(t).value}, not CaseB")
    g, u, v = t.graph, t.u, t.v
    gg = g.graph
    tau, beta = t.tau, t.beta

    tree = bc_tree(gg.without([v]))
    owners = tree.blocks_containing(u)
    if len(owners) != 1:
        raise InternalContradiction("u lies in several blocks of G - v")
    hb = tree.blocks[owners[0]]
    if len(hb.vertices) < 3:
        raise InternalContradiction("block H has fewer than three vertices")
    y1 = tau[-2]
    if y1 not in hb.vertices:
        raise InternalContradiction("y_1 is not in H")
    h_triple = _revalidate(g.restrict(hb.edges), u, y1, "H")

    host = Graph.from_edges(hb.edges, list(hb.vertices) + [v])
    bridges = bridges_of(gg, host).bridges
    for br in bridges:
        if v not in br.attachments or len(br.attachments) != 2:
            raise InternalContradiction(f"bridge with attachments {sorted(br.attachments)}")

    idx = max(i for i in range(len(beta) - 1) if beta[i] in hb.vertices)
    y_ell = beta[idx]
    if not 0 < idx:
        raise InternalContradiction("y_ell coincides with u")
    last_edge = edge_key(beta[idx], beta[idx + 1])
    last = next(br for br in bridges if last_edge in br.edges)
    others = [br for br in bridges if br is not last]
    for br in others:
        if not br.trivial:
            raise InternalContradiction("a bridge other than the last one is non-trivial")
    if edge_key(y1, v) not in {next(iter(br.edges)) for br in others}:
        raise InternalContradiction("edge y_1 v is not a trivial bridge")

    # counter-clockwise sweep around v starting at y_1
    rot = g.rotation[v]
    start = rot.index(y1)
    sweep = [rot[(start - i) % len(rot)] for i in range(len(rot))]
    trivial_ends = {(set(next(iter(br.edges))) - {v}).pop() for br in others}
    order = [w for w in sweep if w in trivial_ends]
    tail = [w for w in sweep if w not in trivial_ends]
    if sweep[: len(order)] != order:
        raise InternalContradiction("trivial bridges are not contiguous around v")
    if not all(w in last.vertices for w in tail):
        raise InternalContradiction("unexpected neighbour of v")

    beta_h = h_triple.beta
    pos = {w: i for i, w in enumerate(beta_h)}
    if any(w not in pos for w in order) or y_ell not in pos:
        raise InternalContradiction("bridge attachment not on the counter-clockwise path of H")
    seq = [pos[w] for w in order]
    if any(a <= b for a, b in zip(seq, seq[1:])) or seq[-1] < pos[y_ell]:
        raise InternalContradiction("bridge attachments out of order along H")
    if not 0 < pos[y_ell] < len(beta_h) - 1:
        raise InternalContradiction("y_ell is not internal to the counter-clockwise path of H")

    trivial = [(w, v) for w in order]
    if last.trivial:
        mode = "edge"
        single = _revalidate(g.restrict(last.edges), y_ell, v, "last bridge")
        chain = CaseADecomposition((single,), ())
        closed = None
    elif (y_ell, v) in trivial:
        mode = "merged"
        trivial.remove((y_ell, v))
        closed = _revalidate(g.restrict(set(last.edges) | {edge_key(y_ell, v)}), y_ell, v, "closed bridge")
        chain = CaseADecomposition((closed,), ())
    else:
        mode = "blocks"
        open_g = g.restrict(last.edges)
        # neighbours of v and y_ell along the counter-clockwise boundary of G
        w0 = beta[-2]
        q0 = beta[idx + 1]
        closed_g = open_g.with_edge(v, y_ell, open_g.predecessor(v, w0), q0, outer_dart=(v, w0))
        closed = _revalidate(closed_g, y_ell, v, "closed bridge")
        if closed.tau != (y_ell, v):
            raise InternalContradiction("added edge y_ell v is not on the clockwise side")
        chain = _block_chain(g, open_g.graph, y_ell, v)
    return CaseBDecomposition(h_triple, tuple(trivial), chain, y1, y_ell, mode, closed)


# ---------------------------------------------------------------------------
# Recursion tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DecompositionTree:
    triple: ScgTriple
    kind: Kind
    case_a: Optional[CaseADecomposition] = None
    case_b: Optional[CaseBDecomposition] = None
    children: tuple["DecompositionTree", ...] = field(default_factory=tuple)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    def to_json(self) -> dict:
        t = self.triple
        out: dict = {
            "kind": self.kind.value,
            "u": t.u,
            "v": t.v,
            "vertices": t.vertices,
            "tau": list(t.tau),
            "beta": list(t.beta),
        }
        if self.case_a is not None:
            out["shared_vertices"] = list(self.case_a.shared_vertices)
        if self.case_b is not None:
            cb = self.case_b
            out.update(
                y1=cb.y1,
                y_ell=cb.y_ell,
                trivial_bridges=[list(e) for e in cb.trivial_bridges],
                chain_mode=cb.chain_mode,
                chain_joints=list(cb.chain.joints),
            )
        out["children"] = [c.to_json() for c in self.children]
        return out


def build_tree(t: ScgTriple) -> DecompositionTree:
    kind = classify(t)
    if kind in (Kind.TRIVIAL, Kind.CYCLE):
        return DecompositionTree(t, kind)
    if kind is Kind.CASE_A:
        dec = decompose_case_a(t)
        return DecompositionTree(t, kind, case_a=dec, children=tuple(build_tree(x) for x in dec.layers))
    dec_b = decompose_case_b(t)
    kids = (build_tree(dec_b.h_triple),) + tuple(build_tree(x) for x in dec_b.chain.layers)
    return DecompositionTree(t, kind, case_b=dec_b, children=kids)
