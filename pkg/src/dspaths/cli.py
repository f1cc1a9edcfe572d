"""Command-line front end: solve, oracle, gen, verify.

Exit codes are the machine contract: 0 yes / verified, 1 no / rejected,
2 usage or input errors, 3 probabilistic no, 4 instance too large for the
oracle.  JSON goes to stdout (or --json FILE); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FsPath

from . import generators
from .graph import GraphParseError, NoShortestPathError, format_graph, parse_graph
from .oracle import OracleBudgetError
from .solver import (
    CertificateError,
    SolveConfig,
    certificate_from_json_dict,
    result_to_json_dict,
    solve,
    verify_certificate,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_PROBABILISTIC_NO = 3
EXIT_TOO_LARGE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dspaths",
        description=(
            "Decide and certify whether a graph has k shortest s-t paths "
            "with pairwise arc-set Hamming distance at least d."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solve_flags(p: argparse.ArgumentParser, force_oracle: bool) -> None:
        p.add_argument("-g", "--graph", required=True, help="graph file")
        p.add_argument("-k", type=int, required=True, help="number of paths")
        p.add_argument("-d", type=int, required=True, help="pairwise distance bound")
        if not force_oracle:
            p.add_argument(
                "--mode", choices=("fpt", "oracle", "hybrid"), default="hybrid"
            )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--coloring-budget", type=int, default=64)
        p.add_argument("--enum-budget", type=int, default=10**5)
        p.add_argument("--json", metavar="OUT", help="write the certificate here")
        p.add_argument("--threads", type=int, default=1, help="worker cap")

    p_solve = sub.add_parser("solve", help="run the solver")
    add_solve_flags(p_solve, force_oracle=False)

    p_oracle = sub.add_parser("oracle", help="run the exact brute-force solver")
    add_solve_flags(p_oracle, force_oracle=True)

    p_gen = sub.add_parser("gen", help="generate an instance")
    gen_sub = p_gen.add_subparsers(dest="family", required=True)

    p_grid = gen_sub.add_parser("grid", help="lattice of east/south unit arcs")
    p_grid.add_argument("--width", type=int, required=True)
    p_grid.add_argument("--height", type=int, required=True)
    p_grid.add_argument("-o", "--output", required=True)

    p_layered = gen_sub.add_parser("layered", help="random layered DAG")
    p_layered.add_argument("--layers", type=int, required=True)
    p_layered.add_argument("--width", type=int, required=True)
    p_layered.add_argument("--arc-prob", type=float, default=0.5)
    p_layered.add_argument("--seed", type=int, default=0)
    p_layered.add_argument("-o", "--output", required=True)

    p_binpack = gen_sub.add_parser("binpack", help="bin-packing reduction")
    p_binpack.add_argument(
        "--items", required=True, help="comma-separated positive integers"
    )
    p_binpack.add_argument("--bins", type=int, required=True)
    p_binpack.add_argument(
        "--capacity", type=int, help="bin capacity (default: sum/bins)"
    )
    p_binpack.add_argument("-o", "--output", required=True)

    p_verify = sub.add_parser("verify", help="check a certificate")
    p_verify.add_argument("-g", "--graph", required=True)
    p_verify.add_argument("-c", "--certificate", required=True)
    p_verify.add_argument("-k", type=int, required=True)
    p_verify.add_argument("-d", type=int, required=True)

    return parser


def _read_graph(path: str):
    try:
        text = FsPath(path).read_text()
    except OSError as exc:
        raise SystemExit2(f"cannot read {path}: {exc}")
    return parse_graph(text)


class SystemExit2(Exception):
    """Input or usage error; maps to exit code 2."""


def _emit_json(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out_path:
        FsPath(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(args: argparse.Namespace, force_oracle: bool) -> int:
    if args.k < 0 or args.d < 0:
        raise SystemExit2("k and d must be nonnegative")
    if args.threads < 1:
        raise SystemExit2("--threads must be at least 1")
    g = _read_graph(args.graph)
    cfg = SolveConfig(
        mode="oracle" if force_oracle else args.mode,
        seed=args.seed,
        coloring_budget=args.coloring_budget,
        enumeration_budget=args.enum_budget,
    )
    try:
        result = solve(g, args.k, args.d, cfg)
    except NoShortestPathError as exc:
        raise SystemExit2(str(exc))
    except OracleBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    _emit_json(result_to_json_dict(result, args.k, args.d), args.json)
    if result.decision == "yes":
        return EXIT_YES
    if result.decision == "probabilistic_no":
        return EXIT_PROBABILISTIC_NO
    return EXIT_NO


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.family == "grid":
        graph = generators.gen_grid(args.width, args.height)
        sidecar = {
            "ask_k": 1,
            "ask_d": 0,
            "ell": args.width + args.height,
            "doubled": False,
            "decomposition": None,
        }
    elif args.family == "layered":
        graph = generators.gen_layered(args.layers, args.width, args.arc_prob, args.seed)
        sidecar = {
            "ask_k": 1,
            "ask_d": 0,
            "ell": args.layers + 1,
            "doubled": False,
            "decomposition": None,
        }
    else:
        try:
            items = tuple(int(x) for x in args.items.split(","))
        except ValueError:
            raise SystemExit2("--items must be comma-separated integers")
        total = sum(items)
        capacity = args.capacity
        if capacity is None:
            if args.bins <= 0 or total % args.bins != 0:
                raise SystemExit2("item sum is not divisible by --bins")
            capacity = total // args.bins
        inst = generators.gen_binpack(
            generators.BinPackingInstance(items=items, bins=args.bins, capacity=capacity)
        )
        graph = inst.graph
        sidecar = generators.sidecar_dict(inst)

    out = FsPath(args.output)
    try:
        out.write_text(format_graph(graph))
        out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    except OSError as exc:
        raise SystemExit2(f"cannot write output: {exc}")
    print(
        f"wrote {out} ({graph.n} vertices, {graph.m} arcs) and {out.with_suffix('.json')}",
        file=sys.stderr,
    )
    return EXIT_YES


def _cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    try:
        data = json.loads(FsPath(args.certificate).read_text())
    except OSError as exc:
        raise SystemExit2(f"cannot read {args.certificate}: {exc}")
    except json.JSONDecodeError as exc:
        raise SystemExit2(f"malformed JSON: {exc}")
    cert = certificate_from_json_dict(data)
    ok, report = verify_certificate(g, cert, args.k, args.d)
    if ok:
        print("certificate verified", file=sys.stderr)
        return EXIT_YES
    print(f"certificate rejected: {report}", file=sys.stderr)
    return EXIT_NO


def run_cli(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        if args.command == "solve":
            return _cmd_solve(args, force_oracle=False)
        if args.command == "oracle":
            return _cmd_solve(args, force_oracle=True)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "verify":
            return _cmd_verify(args)
        raise SystemExit2(f"unknown command {args.command!r}")
    except (SystemExit2, GraphParseError, CertificateError, generators.GeneratorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
