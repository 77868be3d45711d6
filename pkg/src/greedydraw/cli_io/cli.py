"""Command-line driver.

    greedydraw gen --family wheel --n 6 | greedydraw draw --alpha 0.5 | greedydraw verify

Exit codes: 0 success, 1 verification failure, 2 input error,
3 precision exhausted at the cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import mpmath

from greedydraw.cli_io.documents import DocumentError, DrawingDocument, GraphDocument, dumps, loads
from greedydraw.cli_io.generators import BadSpec, GeneratorSpec, generate
from greedydraw.cli_io.svg import SvgOptions, render_svg
from greedydraw.cli_io.triple import Not3Connected, prepare_triple
from greedydraw.decomposition import InvalidTriple, ScgTriple, build_tree, require_scg
from greedydraw.layout import DEFAULT_PRECISION, PrecisionExhausted, draw, precision_cap
from greedydraw.plane_graph import PlaneGraphError
from greedydraw.verifier import verify

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------


def _read(path: Optional[str], what: str) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _graph_doc(path: Optional[str]) -> GraphDocument:
    return GraphDocument.from_json(loads(_read(path, "graph document"), "graph document"))


def _triple(doc: GraphDocument) -> ScgTriple:
    if doc.u is not None or doc.v is not None:
        if doc.u is None or doc.v is None:
            raise InputError("u and v must be given together")
        return require_scg(doc.graph, doc.u, doc.v)
    return prepare_triple(doc.graph)


def _angle(text: str) -> str:
    try:
        a = mpmath.mpf(text)
    except (ValueError, TypeError):
        raise InputError(f"--alpha: not a number: {text!r}") from None
    if not 0 < a < mpmath.pi / 4:
        raise InputError(f"--alpha must satisfy 0 < alpha < pi/4 (about 0.785398), got {text}")
    return text


def _length(text: str, flag: str) -> str:
    try:
        x = mpmath.mpf(text)
    except (ValueError, TypeError):
        raise InputError(f"{flag}: not a number: {text!r}") from None
    if x < 0 or not mpmath.isfinite(x):
        raise InputError(f"{flag} must be a finite non-negative number, got {text}")
    return text


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    n: object = args.n
    if args.family != "platonic":
        try:
            n = int(args.n)
        except ValueError:
            raise InputError(f"--n must be an integer for family {args.family}") from None
    g = generate(GeneratorSpec(args.family, n, args.seed))
    _write(args.out, dumps(GraphDocument(g).to_json()))
    return EXIT_OK


def cmd_decompose(args) -> int:
    t = _triple(_graph_doc(args.input))
    tree = build_tree(t)
    _write(args.out, json.dumps(tree.to_json(), indent=1) + "\n")
    return EXIT_OK


def cmd_draw(args) -> int:
    alpha = _angle(args.alpha)
    delta = _length(args.delta, "--delta")
    if args.precision < 53:
        raise InputError("--precision must be at least 53 bits")
    try:
        precision_cap()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    doc = _graph_doc(args.input)
    t = _triple(doc)
    d = draw(t, alpha, delta, precision=args.precision)
    _write(args.out, dumps(DrawingDocument(d, doc.labels).to_json()))
    if args.svg:
        _write(args.svg, render_svg(d, SvgOptions(outer_paths=True, baseline=True), doc.labels))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.graph == "-" and args.input in (None, "-"):
        raise InputError("the drawing and the graph cannot both come from standard input")
    graph = _graph_doc(args.graph) if args.graph else None
    raw = loads(_read(args.input, "drawing document"), "drawing document")
    doc = DrawingDocument.from_json(raw, graph)
    d = doc.drawing
    t = require_scg(d.graph, d.u, d.v)
    report = verify(d, t, perturb_samples=args.perturb_samples, seed=args.seed)
    out = report.to_json()
    out = {"format": "greedydraw/report", "version": 1, **out}
    _write(args.out, json.dumps(out, indent=1) + "\n")
    if not report.ok:
        failed = [name for name, v in report.verdicts() if not v.ok]
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="greedydraw", description="Planar greedy drawings of 3-connected plane graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph document")
    g.add_argument("--family", required=True, choices=("wheel", "prism", "cycle", "platonic", "random3c"))
    g.add_argument("--n", required=True, help="size, or the solid name for platonic")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("draw", help="draw a graph document")
    d.add_argument("input", nargs="?", help="graph document (default: standard input)")
    d.add_argument("--alpha", default="0.5", help="angle parameter in radians, 0 < alpha < pi/4")
    d.add_argument("--delta", default="0", help="leftward shift of u")
    d.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="starting precision in bits")
    d.add_argument("--out")
    d.add_argument("--svg")
    d.set_defaults(func=cmd_draw)

    v = sub.add_parser("verify", help="verify a drawing document")
    v.add_argument("input", nargs="?", help="drawing document (default: standard input)")
    v.add_argument("--graph", help="graph document overriding the one embedded in the drawing")
    v.add_argument("--perturb-samples", type=int, default=32)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("decompose", help="print the decomposition tree")
    c.add_argument("input", nargs="?")
    c.add_argument("--out")
    c.set_defaults(func=cmd_decompose)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except PrecisionExhausted as exc:
        sys.stdout.write(json.dumps(exc.to_json(), indent=1) + "\n")
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (InputError, DocumentError, BadSpec, Not3Connected, InvalidTriple, PlaneGraphError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
