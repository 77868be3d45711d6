from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SMALL_CORPUS, corpus_id, drawing_for, triple_for
from greedydraw.cli_io.generators import cycle, platonic
from greedydraw.decomposition import require_scg
from greedydraw.layout import Drawing, Witnesses, draw
from greedydraw.plane_graph import PlaneGraph
from greedydraw.verifier import (
    FAIL,
    INDETERMINATE,
    PASS,
    HypothesisUnmet,
    Stuck,
    check_greedy,
    check_perturbation,
    check_planar,
    check_slope_properties,
    check_wedge,
    check_witness_paths,
    extract_greedy_path,
    perturbation_radius,
    verify,
)


def drawing(graph: PlaneGraph, coords, u=None, v=None, witnesses=None, precision=128) -> Drawing:
    u = graph.outer_dart[0] if u is None else u
    v = graph.outer_dart[1] if v is None else v
    pos = {z: (mpmath.mpf(x), mpmath.mpf(y)) for z, (x, y) in coords.items()}
    return Drawing(graph, u, v, pos, "0.5", "0", precision, witnesses)


def path_graph(n: int) -> PlaneGraph:
    rot = {i: tuple(j for j in (i - 1, i + 1) if 0 <= j < n) for i in range(n)}
    return PlaneGraph(rot, (0, 1))


SQUARE = {0: (0, 0), 1: (0, 1), 2: (1, 1), 3: (1, 0)}


# ---------------------------------------------------------------------------
# Planarity
# ---------------------------------------------------------------------------


def test_convex_square_is_planar():
    assert check_planar(drawing(cycle(4), SQUARE)).ok


def test_k4_on_a_square_crosses():
    k4 = platonic("tetra")
    coords = dict(zip(sorted(k4.vertices), [(0, 0), (1, 1), (1, 0), (0, 1)]))
    verdict = check_planar(drawing(k4, coords))
    assert verdict.status == FAIL
    assert verdict.witness["kind"] == "crossing"
    x, y = (float(c) for c in verdict.witness["point"])
    assert x == pytest.approx(0.5) and y == pytest.approx(0.5)


def test_coincident_and_touching_vertices():
    v = check_planar(drawing(path_graph(3), {0: (0, 0), 1: (1, 0), 2: (1, 0)}))
    assert v.witness["kind"] == "coincident_vertices"
    v = check_planar(drawing(path_graph(3), {0: (0, 0), 1: (2, 0), 2: (1, 0)}))
    assert v.witness["kind"] == "vertex_on_edge"


def _segments_intersect(p1, p2, q1, q2) -> bool:
    """Closed segments meet; solved with exact fractions, independent of orientation tests."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    r = (q1[0] - p1[0], q1[1] - p1[1])
    if den == 0:
        if r[0] * d1[1] - r[1] * d1[0] != 0:
            return False  # parallel, different lines
        # collinear: overlap of projections onto d1
        dd = d1[0] * d1[0] + d1[1] * d1[1]
        t0 = Fraction(r[0] * d1[0] + r[1] * d1[1], dd)
        t1 = t0 + Fraction(d2[0] * d1[0] + d2[1] * d1[1], dd)
        return max(min(t0, t1), 0) <= min(max(t0, t1), 1)
    s = Fraction(r[0] * d2[1] - r[1] * d2[0], den)
    t = Fraction(r[0] * d1[1] - r[1] * d1[0], den)
    return 0 <= s <= 1 and 0 <= t <= 1


def planar_oracle(coords, edges) -> bool:
    pts = list(coords.values())
    if len(set(pts)) < len(pts):
        return False
    for a, b in edges:
        for w, p in coords.items():
            if w not in (a, b) and _segments_intersect(coords[a], coords[b], p, p):
                return False
    for i, (a, b) in enumerate(edges):
        for c, e in edges[i + 1:]:
            if {a, b} & {c, e}:
                continue
            if _segments_intersect(coords[a], coords[b], coords[c], coords[e]):
                return False
    return True


@pytest.mark.parametrize("seed", range(60))
def test_planarity_matches_exact_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    g = cycle(n)
    coords = {z: (rng.randint(0, 4), rng.randint(0, 4)) for z in g.vertices}
    d = drawing(g, coords)
    assert check_planar(d).ok == planar_oracle(coords, list(g.edges))


# ---------------------------------------------------------------------------
# Greediness
# ---------------------------------------------------------------------------


def test_collinear_path_is_greedy():
    d = drawing(path_graph(4), {0: (0, 0), 1: (1, 0), 2: (2, 0), 3: (3, 0)})
    assert check_greedy(d).ok
    assert extract_greedy_path(d, 0, 3) == (0, 1, 2, 3)
    assert extract_greedy_path(d, 3, 1) == (3, 2, 1)


def test_detour_is_not_greedy():
    d = drawing(path_graph(3), {0: (0, 0), 1: (3, 0), 2: (1, 1)})
    v = check_greedy(d)
    assert v.status == FAIL
    assert (v.witness["source"], v.witness["target"]) == (0, 2)
    with pytest.raises(Stuck):
        extract_greedy_path(d, 0, 2)


def test_greedy_path_takes_the_closest_neighbour():
    g = cycle(4)
    d = drawing(g, SQUARE)
    # both neighbours of 0 are closer to 2; they tie, so the smaller id wins
    assert extract_greedy_path(d, 0, 2) == (0, 1, 2)
    with pytest.raises(ValueError):
        extract_greedy_path(d, 0, 2, tie_break="random")


@given(st.sampled_from(SMALL_CORPUS), st.integers(0, 10**6))
def test_greedy_check_agrees_with_routing(case, seed):
    t = triple_for(*case)
    rng = random.Random(seed)
    coords = {z: (rng.randint(-6, 6), rng.randint(-6, 6)) for z in t.vertices}
    d = drawing(t.graph, coords)
    routable = True
    for x in t.vertices:
        for y in t.vertices:
            if x == y:
                continue
            try:
                extract_greedy_path(d, x, y)
            except Stuck:
                routable = False
    assert check_greedy(d).ok == routable


# ---------------------------------------------------------------------------
# Slope properties and witness paths
# ---------------------------------------------------------------------------


def test_single_edge_passes_vacuously():
    t = require_scg(PlaneGraph({0: (1,), 1: (0,)}, (0, 1)), 0, 1)
    props = check_slope_properties(draw(t), t)
    assert all(v.status == PASS and v.checked == 0 for v in props.values())


def test_apex_above_the_line_breaks_lower_path():
    c = cycle(3)
    w = c.outer_walk
    t = require_scg(c, w[0], w[1])
    d = draw(t, "0.5")
    assert all(v.ok for v in check_slope_properties(d, t).values())
    apex = t.beta[1]
    pos = dict(d.positions)
    pos[apex] = (pos[apex][0], -pos[apex][1])
    bad = replace(d, positions=pos)
    props = check_slope_properties(bad, t)
    assert props["3"].status == FAIL
    assert props["2"].ok


def test_u_off_the_line_breaks_property_2():
    t = triple_for("wheel", 5)
    d = drawing_for("wheel", 5)
    pos = dict(d.positions)
    x, y = pos[t.u]
    pos[t.u] = (x, y + mpmath.mpf(2) ** -200)
    assert check_slope_properties(replace(d, positions=pos), t)["2"].status == FAIL


def test_missing_witnesses_are_indeterminate():
    t = triple_for("wheel", 5)
    d = replace(drawing_for("wheel", 5), witnesses=None)
    props = check_slope_properties(d, t)
    assert props["4"].status == INDETERMINATE and props["5"].status == INDETERMINATE
    assert check_witness_paths(d, t).status == INDETERMINATE


def test_tampered_witness_path_fails():
    t = triple_for("wheel", 5)
    d = drawing_for("wheel", 5)
    w = d.witnesses
    (x, y), path = next(((k, p) for k, p in w.pairs.items() if len(p) >= 3))
    pairs = dict(w.pairs)
    pairs[(x, y)] = path[::-1]
    bad = replace(d, witnesses=Witnesses(w.to_v, w.to_u, pairs))
    v = check_witness_paths(bad, t)
    assert v.status == FAIL and v.witness["source"] == x and v.witness["target"] == y


@pytest.mark.parametrize("case", SMALL_CORPUS, ids=corpus_id)
def test_layout_output_verifies(case):
    d = drawing_for(*case)
    report = verify(d, triple_for(*case))
    assert report.ok, report.to_json()
    doc = report.to_json()
    assert doc["ok"] is True
    assert {"planar", "greedy", "property_2", "property_5", "witness_paths", "junctions"} <= set(doc)


# ---------------------------------------------------------------------------
# Perturbation
# ---------------------------------------------------------------------------


def test_zero_samples_pass_trivially():
    v = check_perturbation(drawing_for("wheel", 5), samples=0)
    assert v.ok and v.checked == 0


def test_unit_square_survives_its_radius():
    d = drawing(cycle(4), SQUARE)
    r = perturbation_radius(d)
    assert abs(r - (mpmath.sqrt(2) - 1) / 5) < mpmath.mpf(2) ** -50
    assert check_perturbation(d, samples=100).ok


def near_degenerate_quad(h) -> Drawing:
    """Concave quadrilateral whose reflex vertex 3 sits ``h`` to the left of edge 1-2."""
    g = cycle(4)
    coords = {0: (0, 0), 1: (2, 0), 2: (2, 2), 3: (2 - h, 1)}
    assert set(g.edges) == {(0, 1), (1, 2), (2, 3), (0, 3)}
    return drawing(g, coords)


def test_near_degenerate_quad_breaks_at_ten_times_the_radius():
    h = mpmath.mpf(2) ** -20
    d = near_degenerate_quad(h)
    assert check_planar(d).ok
    assert float(3 * perturbation_radius(d) / h) == pytest.approx(1, rel=1e-12)
    assert check_perturbation(d, samples=32).ok
    v = check_perturbation(d, samples=32, scale=10)
    assert v.status == FAIL and "planarity" in v.witness


# ---------------------------------------------------------------------------
# Wedges
# ---------------------------------------------------------------------------


def test_wedge_right_of_horizontal():
    pos = {0: (0, 0), 1: (1, -1), 2: (2, -0.5)}
    d = drawing(path_graph(3), pos)
    assert check_wedge(d, 0, 0, 0, 0, "right").ok
    assert check_wedge(d, 0, 0, 0, 0, "left").status == FAIL


def test_wedge_vertex_on_the_line_fails():
    pos = {0: (0, 0), 1: (1, -1), 2: (3, 0)}
    d = drawing(path_graph(3), pos)
    v = check_wedge(d, 0, 0, 0, 0, "right")
    assert v.status == FAIL and v.witness["vertex"] == 2


def test_wedge_with_a_steep_line():
    # the line through the apex at slope 1 leaves (1, 0) on its right and (0, 1) on its left
    pos = {0: (0, 0), 1: (1, 0), 2: (0, 1)}
    d = drawing(path_graph(3), pos)
    slope = mpmath.pi / 4
    assert check_wedge(d, 0, slope, slope, slope, "right", vertices=[1]).ok
    assert check_wedge(d, 0, slope, slope, slope, "left", vertices=[2]).ok


def test_wedge_boundary_hypothesis():
    pos = {0: (0, 0), 1: (1, -1), 2: (-1, 1)}
    d = drawing(path_graph(3), pos)
    assert check_wedge(d, 0, 0, 0, 0, "right", vertices=[1], boundary=[(0, 1)]).ok
    with pytest.raises(HypothesisUnmet):
        check_wedge(d, 0, 0, 0, 0, "right", vertices=[1], boundary=[(0, 2)])
    with pytest.raises(ValueError):
        check_wedge(d, 0, 0, 0, 0, "up")
