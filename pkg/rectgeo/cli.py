"""Command line interface.

Every command prints one JSON document carrying ``"format_version": 1`` on stdout. Exit codes:
0 ok, 1 invalid input, 2 internal contradiction, 3 I/O.

Output is deterministic for a given input and seed: wall-clock fields (``micros`` on query
results, ``build_micros`` and ``percentiles`` on bench reports) are only written with the
global ``--timing`` flag.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from rectgeo import __version__
from rectgeo.benchmark import run_benchmark
from rectgeo.boundary import boundary_walk
from rectgeo.complex import PointSpec, validate_cat0
from rectgeo.config import GeodesicContext
from rectgeo.engine import query
from rectgeo.exceptions import (
    EXIT_INVALID_INPUT,
    EXIT_OK,
    ErrorContext,
    RectGeoException,
    exit_code_for,
)
from rectgeo.generators import FAMILIES, GeneratorSpec, generate
from rectgeo.oracle import build_sample_graph, oracle_distance
from rectgeo.polygon import triangulate_monotone
from rectgeo.serialization import (
    FORMAT_VERSION,
    boundary_to_dict,
    chain_to_dict,
    load_complex,
    load_structure,
    path_to_dict,
    save,
    to_json,
)
from rectgeo.structures import STRUCTURE_KINDS, build_structure, structure_sizes
from rectgeo.theta import compute_theta
from rectgeo.unfolding import unfold

logger = logging.getLogger("rectgeo.cli")


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the invalid-input code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID_INPUT, f"{self.prog}: error: {message}\n")


def _document(type_name: str, payload: Dict[str, Any]) -> Dict[str, Any]:
    doc = {"type": type_name, "format_version": FORMAT_VERSION}
    doc.update(payload)
    return doc


def _emit(doc: Dict[str, Any]) -> None:
    print(to_json(doc, indent=2))


def _point(text: str) -> PointSpec:
    try:
        return PointSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _cmd_validate(args: argparse.Namespace) -> int:
    K = load_complex(args.complex)
    report = validate_cat0(K, seed=args.seed)
    _emit(_document("ValidationReport", report.to_dict()))
    if args.strict:
        report.raise_for_status()
    return EXIT_OK if report.accepted else EXIT_INVALID_INPUT


def _cmd_theta(args: argparse.Namespace) -> int:
    T = compute_theta(load_complex(args.complex))
    _emit(_document("ThetaDecomposition", T.to_dict()))
    return EXIT_OK


def _cmd_build(args: argparse.Namespace) -> int:
    K = load_complex(args.complex)
    validate_cat0(K, strict=True, seed=args.seed)
    S = build_structure(K, args.kind)
    save(S, args.out)
    logger.info("built %s structure into %s", S.kind, args.out)
    _emit(_document("BuildReport", {"out": args.out, "sizes": structure_sizes(S)}))
    return EXIT_OK


def _cmd_boundary(args: argparse.Namespace) -> int:
    S = load_structure(args.structure)
    _emit(boundary_to_dict(boundary_walk(S, args.p, args.q)))
    return EXIT_OK


def _cmd_unfold(args: argparse.Namespace) -> int:
    S = load_structure(args.structure)
    chain = unfold(boundary_walk(S, args.p, args.q), S.theta)
    doc = chain_to_dict(chain)
    if args.emit_triangulation:
        doc["triangulations"] = [
            None if b.bridge else triangulate_monotone(b.loop).to_dict() for b in chain.blocks
        ]
    if args.svg:
        from rectgeo.svg import render_svg

        render_svg(chain, args.svg)
    _emit(doc)
    return EXIT_OK


def _cmd_query(args: argparse.Namespace) -> int:
    S = load_structure(args.structure)
    path = query(S.complex, S, args.source, args.target)
    if args.svg and path.gates[0] != path.gates[1]:
        from rectgeo.svg import render_svg

        render_svg(unfold(boundary_walk(S, *path.gates), S.theta), args.svg, path)
    _emit(path_to_dict(path, timing=args.timing))
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    K = load_complex(args.complex)
    G = build_sample_graph(K, args.h)
    value = oracle_distance(K, args.source, args.target, args.h, graph=G)
    _emit(
        _document(
            "OracleResult",
            {"distance": value, "h": args.h, "nodes": G.node_count, "arcs": G.arc_count},
        )
    )
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(args.family, args.n, args.seed, GeneratorSpec.parse_lengths(args.lengths))
    K = generate(spec)
    save(K, args.out)
    _emit(
        _document(
            "GenerateReport",
            {
                "out": args.out,
                "spec": spec.to_dict(),
                "vertices": K.vertex_count,
                "edges": len(K.edges),
                "faces": len(K.faces),
            },
        )
    )
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.structure:
        S = load_structure(args.structure)
        report = run_benchmark(S.complex, queries=args.queries, seed=args.seed,
                               workers=args.workers, structure=S)
    else:
        report = run_benchmark(load_complex(args.complex), args.kind, args.queries,
                               args.seed, args.workers)
    _emit(_document("BenchmarkReport", report.to_dict(timing=args.timing)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rectgeo", description="Exact geodesics in CAT(0) rectangular complexes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level", default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    parser.add_argument("--timing", action="store_true", help="include wall-clock fields")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override a numeric setting for this run (repeatable)",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check the CAT(0) conditions")
    p.add_argument("--complex", required=True)
    p.add_argument("--strict", action="store_true", help="fail on the first violated condition")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("theta", help="Θ-classes, Inc(G) and its 2-coloring")
    p.add_argument("--complex", required=True)
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("build", help="build a query structure file")
    p.add_argument("--complex", required=True)
    p.add_argument("--kind", choices=STRUCTURE_KINDS, default="auto")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_build)

    for name, func, helptext in (
        ("boundary", _cmd_boundary, "walk the boundary of I(p, q)"),
        ("unfold", _cmd_unfold, "unfold I(p, q) into the plane"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--structure", required=True)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--q", type=int, required=True)
        if name == "unfold":
            p.add_argument("--emit-triangulation", action="store_true")
            p.add_argument("--svg")
        p.set_defaults(func=func)

    p = sub.add_parser("query", help="shortest path between two points")
    p.add_argument("--structure", required=True)
    p.add_argument("--from", dest="source", type=_point, required=True, metavar="F,A,B")
    p.add_argument("--to", dest="target", type=_point, required=True, metavar="F,A,B")
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p.add_argument("--svg")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("oracle", help="sampled upper bound on the geodesic distance")
    p.add_argument("--complex", required=True, help="complex or structure file")
    p.add_argument("--from", dest="source", type=_point, required=True, metavar="F,A,B")
    p.add_argument("--to", dest="target", type=_point, required=True, metavar="F,A,B")
    p.add_argument("--h", type=float, required=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("generate", help="generate a complex file")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lengths", default="unit", help="'unit' or 'uniform:a:b'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("bench", help="time random queries")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--structure")
    source.add_argument("--complex")
    p.add_argument("--kind", choices=STRUCTURE_KINDS, default="auto")
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_bench)
    return parser


def _overrides(pairs: Sequence[str]) -> Dict[str, float]:
    out: Dict[str, float] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ValueError(f"expected KEY=VALUE, got {pair!r}")
        number = float(value)
        out[key.strip()] = int(number) if number.is_integer() and "." not in value else number
    return out


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        with GeodesicContext(**_overrides(args.overrides)):
            with ErrorContext(f"rectgeo {args.command}"):
                return args.func(args)
    except (RectGeoException, OSError, ValueError) as exc:
        logger.error("%s", exc)
        print(f"rectgeo: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
