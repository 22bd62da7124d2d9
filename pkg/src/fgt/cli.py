"""Command-line interface.

Subcommands: gen, solve, reduce, verify, bench, report.

Exit codes: 0 success (or decision answer true), 1 decision answer false,
2 usage error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import config, harness, oracles, reductions
from .errors import FgtError
from .instances import (
    INF,
    MinPlusMatrix,
    TripartiteGraph,
    gen_apsp_instance,
    gen_coloured_graph,
    gen_weighted_graph,
    parse,
    serialize,
)
from .qcost import CostLedger
from .triangles import dmt_solve, tc_solve

_DECISION_PROBLEMS = {"nt", "zwt", "dmt", "tc"}
_WEIGHTED_PROBLEMS = {"apsp", "minplus", "nt", "zwt", "weighted"}


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="instance size when generating")
    p.add_argument("--c", type=float, default=1.0, help="weight-range exponent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.5, help="edge probability (weighted)")
    p.add_argument("--edge-prob", type=float, default=0.5, help="edge probability (coloured)")
    p.add_argument("--num-colours", type=int, default=3)


def _generate(problem: str, args) -> object:
    if args.n is None:
        raise FgtError("--n is required when no input file is given")
    if problem in ("dmt", "tc", "coloured"):
        return gen_coloured_graph(args.n, args.num_colours, args.edge_prob, args.seed)
    if problem == "apsp":
        return gen_apsp_instance(args.n, args.c, args.density, args.seed)
    directed = problem in ("minplus", "weighted")
    if getattr(args, "directed", None) is not None:
        directed = bool(args.directed)
    return gen_weighted_graph(args.n, args.c, args.density, args.seed, directed=directed)


def _load_or_generate(problem: str, args):
    if getattr(args, "infile", None):
        with open(args.infile) as fh:
            return parse(fh.read())
    return _generate(problem, args)


def _emit_matrix(matrix: np.ndarray, out: str | None) -> None:
    lines = []
    for row in matrix:
        lines.append(" ".join("inf" if v == INF else str(int(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    inst = _generate(args.problem, args)
    text = serialize(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _as_tripartite(inst, parts_flag: str | None) -> TripartiteGraph:
    if parts_flag:
        sizes = [int(x) for x in parts_flag.split(",")]
        if len(sizes) != 3 or sum(sizes) != inst.n:
            raise FgtError("--parts must list three sizes summing to n")
        labels = np.repeat([0, 1, 2], sizes)
        return TripartiteGraph(graph=inst, parts=labels)
    return reductions.tripartite_copies(inst)


def _cmd_solve(args) -> int:
    problem, algo = args.problem, args.algo
    inst = _load_or_generate(problem, args)
    ledger = CostLedger(omega_model=args.omega, boost_enabled=args.boost)

    if problem == "apsp":
        if algo == "exact":
            res = oracles.apsp_exact(inst)
        elif algo == "reduction:apsp-to-mm":
            res = reductions.apsp_via_minplus(inst, oracles.minplus_exact)
        else:
            raise FgtError(f"unsupported algo {algo!r} for apsp")
        _emit_matrix(res.dist, args.out)
        return 0

    if problem == "minplus":
        m = MinPlusMatrix.from_entries(inst.w, min_c=inst.c)
        if args.infile2:
            with open(args.infile2) as fh:
                other = parse(fh.read())
            n = MinPlusMatrix.from_entries(other.w, min_c=other.c)
        else:
            n = m
        if algo == "exact":
            res = oracles.minplus_exact(m, n)
        elif algo == "reduction:mm-to-apsp":
            res = reductions.minplus_via_apsp(m, n, oracles.apsp_exact)
        elif algo == "reduction:mm-to-apnt":
            res = reductions.minplus_via_apnt(m, n, oracles.apnt_exact)
        else:
            raise FgtError(f"unsupported algo {algo!r} for minplus")
        _emit_matrix(res.m, args.out)
        return 0

    if problem == "apnt":
        t = _as_tripartite(inst, args.parts)
        if algo == "exact":
            flags = oracles.apnt_exact(t).flags
        elif algo == "reduction:apnt-to-nt":
            flags = reductions.apnt_via_nt(
                t, lambda h: oracles.nt_exact(h, return_witness=True)).flags
        else:
            raise FgtError(f"unsupported algo {algo!r} for apnt")
        _emit_matrix(flags.astype(np.int64), args.out)
        return 0

    if problem == "nt":
        if algo == "exact":
            answer = oracles.nt_exact(inst)
        elif algo == "reduction:nt-to-zwt":
            answer = reductions.nt_via_zwt(inst, oracles.zwt_exact)
        else:
            raise FgtError(f"unsupported algo {algo!r} for nt")
    elif problem == "zwt":
        if algo != "exact":
            raise FgtError(f"unsupported algo {algo!r} for zwt")
        answer = oracles.zwt_exact(inst)
    elif problem == "dmt":
        if args.delta is None:
            raise FgtError("--delta is required for dmt")
        if algo == "exact":
            answer = oracles.dmt_exact(inst, args.delta)
        elif algo in ("small", "large", "auto"):
            answer = dmt_solve(inst, args.delta, ledger, mode=algo,
                               charge_global_n=args.charge_global_n)
        else:
            raise FgtError(f"unsupported algo {algo!r} for dmt")
    elif problem == "tc":
        if algo == "exact":
            answer = oracles.tc_exact(inst)
        elif algo in ("vtgs", "auto"):
            answer = tc_solve(inst, ledger)
        else:
            raise FgtError(f"unsupported algo {algo!r} for tc")
    else:
        raise FgtError(f"unknown problem {args.problem!r}")

    print("true" if answer else "false")
    if args.show_cost:
        print(f"cost {float(ledger.total)}", file=sys.stderr)
    return 0 if answer else 1


def _cmd_reduce(args) -> int:
    kind = "apsp" if args.pipeline.startswith("apsp") else (
        "minplus" if args.pipeline.startswith("mm") else "nt")
    inst = _load_or_generate(kind, args)
    if args.pipeline in ("apnt-to-nt", "nt-to-zwt") and inst.directed:
        raise FgtError(f"pipeline {args.pipeline} needs an undirected source")
    answer, trace = reductions.pipeline_run(inst, args.pipeline, dump_dir=args.dump_dir)
    if isinstance(answer, bool):
        print("true" if answer else "false")
    elif isinstance(answer, oracles.ApspResult):
        _emit_matrix(answer.dist, args.out)
    elif isinstance(answer, MinPlusMatrix):
        _emit_matrix(answer.m, args.out)
    else:
        _emit_matrix(answer.flags.astype(np.int64), args.out)
    for problem in sorted(trace.calls):
        print(f"calls {problem}: {trace.calls[problem]} "
              f"(total size {trace.total_sizes[problem]})", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    result = harness.verify(args.target, args.trials, args.max_n, args.seed,
                            corrupt=args.corrupt, out_dir=args.out_dir)
    status = "pass" if result.passed else "fail"
    print(f"{args.target}: {status} ({result.trials} trials, "
          f"{len(result.failures)} mismatches)")
    for failure in result.failures:
        print(f"  counterexample size {failure['size']}"
              + (f" -> {failure['paths']}" if "paths" in failure else ""))
    return 0 if result.passed else 3


def _cmd_bench(args) -> int:
    params = {
        "num_colours": args.num_colours,
        "edge_prob": args.edge_prob,
        "omega": args.omega,
        "boost": args.boost,
        "charge_global_n": args.charge_global_n,
    }
    if args.colouring:
        params["colouring"] = args.colouring
    if args.delta is not None:
        params["delta"] = args.delta
    if args.alpha is not None:
        params["alpha"] = args.alpha
    sizes = [int(s) for s in args.sizes.split(",")]
    report = harness.bench(args.problem, args.algo, sizes, args.trials, args.seed, params)
    print(f"{report.problem}/{report.algorithm}: slope {report.slope:.4f} "
          f"intercept {report.intercept:.4f} residual_max {report.residual_max:.4f}")
    if args.out:
        harness.report_emit(report, args.format, args.out)
    return 0


def _cmd_report(args) -> int:
    report = harness.report_load_json(args.infile)
    if args.out:
        harness.report_emit(report, args.format, args.out)
    else:
        text = (harness.report_to_json(report) if args.format == "json"
                else harness.report_to_csv(report))
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fgt", description=__doc__)
    parser.add_argument("--distinct-triples", choices=("true", "false"),
                        help="triple admissibility convention (default true)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--problem", required=True,
                   choices=("apsp", "minplus", "nt", "zwt", "dmt", "tc", "weighted", "coloured"))
    _add_gen_flags(p)
    p.add_argument("--directed", type=int, choices=(0, 1))
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--problem", required=True,
                   choices=("apsp", "minplus", "apnt", "nt", "zwt", "dmt", "tc"))
    p.add_argument("--algo", default="exact")
    p.add_argument("--in", dest="infile")
    p.add_argument("--in2", dest="infile2")
    p.add_argument("--parts", help="three part sizes a,b,c for apnt inputs")
    p.add_argument("--delta", type=int)
    p.add_argument("--omega", type=float, default=2.3728)
    p.add_argument("--boost", action="store_true")
    p.add_argument("--charge-global-n", action="store_true")
    p.add_argument("--show-cost", action="store_true")
    _add_gen_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("reduce", help="run a reduction pipeline with exact leaves")
    p.add_argument("--pipeline", required=True, choices=reductions.PIPELINES)
    p.add_argument("--in", dest="infile")
    p.add_argument("--dump-dir")
    _add_gen_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("verify", help="differential suite against the exact oracles")
    p.add_argument("--target", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corrupt", action="store_true",
                   help="intentionally break the reduction (tests the tester)")
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="scaling benchmark with fitted exponent")
    p.add_argument("--problem", required=True, choices=("dmt", "tc"))
    p.add_argument("--algo", required=True, choices=("vtgs", "small", "large", "auto"))
    p.add_argument("--sizes", required=True, help="comma-separated, e.g. 64,128,256,512")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--colouring", choices=("capacity",))
    p.add_argument("--num-colours", type=int, default=4)
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--omega", type=float, default=2.3728)
    p.add_argument("--boost", action="store_true")
    p.add_argument("--charge-global-n", action="store_true")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("report", help="re-emit a JSON report as json or csv")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.distinct_triples is not None:
        config.set_distinct_triples(args.distinct_triples == "true")
    try:
        return args.func(args)
    except FgtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
