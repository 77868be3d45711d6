from __future__ import annotations

import io
import json

import pytest

from conftest import SMALL_CORPUS, corpus_id, drawing_for, triple_for
from greedydraw.cli_io.cli import main
from greedydraw.cli_io.documents import DocumentError, DrawingDocument, GraphDocument, dumps, loads
from greedydraw.cli_io.generators import BadSpec, GeneratorSpec, cycle, generate, platonic, random3c
from greedydraw.cli_io.svg import SvgOptions, render_svg
from greedydraw.cli_io.triple import Not3Connected, prepare_triple
from greedydraw.decomposition import ScgTriple, require_scg
from greedydraw.layout import CAP_ENV, draw
from greedydraw.plane_graph import PlaneGraph


def run(argv, stdin: str = "", monkeypatch=None, capsys=None):
    if monkeypatch is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr() if capsys is not None else ("", "")
    return code, out, err


# ---------------------------------------------------------------------------
# Generators and root triples
# ---------------------------------------------------------------------------


def test_generators_are_deterministic():
    a, b = random3c(30, 7), random3c(30, 7)
    assert a.rotation == b.rotation and a.outer_dart == b.outer_dart
    assert random3c(30, 8).rotation != a.rotation
    assert isinstance(prepare_triple(a), ScgTriple)
    assert len(a.vertices) == 30


def test_generate_dispatch_and_errors():
    assert len(generate(GeneratorSpec("wheel", 6)).vertices) == 7
    assert len(generate(GeneratorSpec("prism", 5)).vertices) == 10
    assert len(generate(GeneratorSpec("platonic", "icosa")).vertices) == 12
    with pytest.raises(BadSpec):
        generate(GeneratorSpec("hypercube", 3))
    with pytest.raises(BadSpec):
        generate(GeneratorSpec("platonic", "sphere"))
    with pytest.raises(BadSpec):
        generate(GeneratorSpec("wheel", "six"))


def test_prepare_triple():
    with pytest.raises(Not3Connected) as info:
        prepare_triple(cycle(4))
    assert len(info.value.witness) == 2
    t = prepare_triple(platonic("octa"))
    assert t.u == min(t.graph.outer_walk)
    assert t.v == t.tau[1]


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("case", SMALL_CORPUS, ids=corpus_id)
def test_graph_document_round_trip(case):
    g = triple_for(*case).graph
    labels = {z: f"v{z}" for z in list(g.vertices)[:3]}
    doc = GraphDocument(g, labels, 0, None)
    back = GraphDocument.from_json(loads(dumps(doc.to_json())))
    assert back.graph.rotation == g.rotation
    assert back.graph.outer_dart == g.outer_dart
    assert back.labels == labels and back.u == 0 and back.v is None


@pytest.mark.parametrize("case", [("wheel", 6, 0), ("platonic", "dodeca", 0), ("random3c", 20, 1)], ids=corpus_id)
def test_drawing_document_is_bit_exact(case):
    d = drawing_for(*case)
    back = DrawingDocument.from_json(loads(dumps(DrawingDocument(d).to_json()))).drawing
    assert back.precision == d.precision
    for z, (x, y) in d.positions.items():
        bx, by = back.positions[z]
        assert bx._mpf_ == x._mpf_ and by._mpf_ == y._mpf_
    assert dict(back.witnesses.pairs) == dict(d.witnesses.pairs)
    assert dict(back.witnesses.to_v) == dict(d.witnesses.to_v)
    assert (back.u, back.v, back.alpha, back.delta) == (d.u, d.v, d.alpha, d.delta)


def test_graph_document_errors_name_the_field():
    good = GraphDocument(platonic("tetra")).to_json()
    bad = json.loads(json.dumps(good))
    bad["rotations"]["0"][0] = "x"
    with pytest.raises(DocumentError) as info:
        GraphDocument.from_json(bad)
    assert info.value.path == "rotations.0[0]"
    bad = dict(good, format="something/else")
    with pytest.raises(DocumentError) as info:
        GraphDocument.from_json(bad)
    assert info.value.path == "format"
    with pytest.raises(DocumentError):
        loads("{not json")


def test_drawing_document_errors():
    good = DrawingDocument(drawing_for("wheel", 5)).to_json()
    bad = json.loads(json.dumps(good))
    bad["positions"]["1"]["x"] = "one"
    with pytest.raises(DocumentError) as info:
        DrawingDocument.from_json(bad)
    assert info.value.path == "positions.1.x"
    bad = json.loads(json.dumps(good))
    del bad["positions"]["1"]
    with pytest.raises(DocumentError) as info:
        DrawingDocument.from_json(bad)
    assert info.value.path == "positions"


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------


def test_svg_of_a_single_edge():
    t = require_scg(PlaneGraph({0: (1,), 1: (0,)}, (0, 1)), 0, 1)
    svg = render_svg(draw(t))
    assert svg.count('class="edge"') == 1
    assert svg.count("<circle") == 2
    assert svg.startswith("<?xml")


def test_svg_of_k4():
    d = drawing_for("platonic", "tetra")
    svg = render_svg(d, SvgOptions(outer_paths=True, baseline=True), {0: "a<b"})
    assert svg.count('class="edge"') == 6
    assert svg.count("<circle") == 4
    assert svg.count('class="tau"') == 1 and svg.count('class="beta"') == 1
    assert svg.count('class="baseline"') == 1
    assert "a&lt;b" in svg


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------


def test_pipeline_through_files(tmp_path, capsys):
    g, d, r, s = (tmp_path / name for name in ("g.json", "d.json", "r.json", "d.svg"))
    assert main(["gen", "--family", "wheel", "--n", "6", "--out", str(g)]) == 0
    assert main(["draw", str(g), "--alpha", "0.5", "--out", str(d), "--svg", str(s)]) == 0
    assert main(["verify", str(d), "--out", str(r)]) == 0
    report = json.loads(r.read_text())
    assert report["ok"] is True and report["format"] == "greedydraw/report"
    assert report["perturbation"]["checked"] == 32
    assert s.read_text().count('class="edge"') == 12


def test_pipeline_through_pipes(monkeypatch, capsys):
    code, graph, _ = run(["gen", "--family", "platonic", "--n", "cube"], "", monkeypatch, capsys)
    assert code == 0
    code, drawing, _ = run(["draw", "--alpha", "0.5"], graph, monkeypatch, capsys)
    assert code == 0
    code, report, _ = run(["verify", "--perturb-samples", "4"], drawing, monkeypatch, capsys)
    assert code == 0 and json.loads(report)["ok"] is True


def test_verify_detects_a_broken_drawing(tmp_path, capsys):
    doc = DrawingDocument(drawing_for("wheel", 5)).to_json()
    doc["positions"]["2"] = dict(doc["positions"]["3"])
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["verify", str(path), "--perturb-samples", "0"]) == 1
    assert "verification failed" in capsys.readouterr().err


def test_verify_with_graph_override(tmp_path, capsys):
    g, d = tmp_path / "g.json", tmp_path / "d.json"
    main(["gen", "--family", "wheel", "--n", "5", "--out", str(g)])
    main(["draw", str(g), "--out", str(d)])
    assert main(["verify", str(d), "--graph", str(g), "--perturb-samples", "0"]) == 0
    assert main(["verify", "-", "--graph", "-"]) == 2


def test_alpha_out_of_range_is_an_input_error(monkeypatch, capsys):
    graph = dumps(GraphDocument(platonic("tetra")).to_json())
    code, _, err = run(["draw", "--alpha", "0.8"], graph, monkeypatch, capsys)
    assert code == 2 and "pi/4" in err
    code, _, err = run(["draw", "--alpha", "abc"], graph, monkeypatch, capsys)
    assert code == 2


def test_malformed_input_reports_the_field(monkeypatch, capsys):
    code, _, err = run(["draw"], "{oops", monkeypatch, capsys)
    assert code == 2 and "not valid JSON" in err
    doc = GraphDocument(platonic("tetra")).to_json()
    doc["rotations"]["0"] = [1, 2, "z"]
    code, _, err = run(["draw"], json.dumps(doc), monkeypatch, capsys)
    assert code == 2 and "rotations.0[2]" in err


def test_not_3_connected_is_an_input_error(monkeypatch, capsys):
    code, _, err = run(["draw"], dumps(GraphDocument(cycle(5)).to_json()), monkeypatch, capsys)
    assert code == 2 and "separation pair" in err


def test_unknown_family_and_bad_arguments(capsys):
    assert main(["gen", "--family", "wheel", "--n", "x"]) == 2
    assert main(["frobnicate"]) == 2


def test_decompose(monkeypatch, capsys):
    code, out, _ = run(["decompose"], dumps(GraphDocument(platonic("tetra")).to_json()), monkeypatch, capsys)
    tree = json.loads(out)
    assert code == 0 and tree["kind"] == "CaseA" and tree["children"]


def test_precision_cap_exit_code(monkeypatch, capsys):
    g = triple_for("random3c", 40, 2).graph
    monkeypatch.setenv(CAP_ENV, "256")
    code, out, err = run(["draw"], dumps(GraphDocument(g).to_json()), monkeypatch, capsys)
    assert code == 3
    doc = json.loads(out)
    assert doc["error"] == "PrecisionExhausted" and doc["cap_bits"] == 256
    monkeypatch.setenv(CAP_ENV, "many")
    code, _, err = run(["draw"], dumps(GraphDocument(g).to_json()), monkeypatch, capsys)
    assert code == 2 and CAP_ENV in err
