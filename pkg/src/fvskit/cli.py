"""Command-line surface: reduce an instance onto a restricted class, verify
a produced artifact, solve small instances exactly, and certify gadgets."""

from __future__ import annotations

import argparse
import json
import sys

from .gadgets import build_gadget, certify_gadget
from .geometry import GeometryError, emit_svg
from .graph import GraphError, Instance
from .pipeline import PipelineError, run_pipeline
from .solvers import (
    EXHAUSTIVE_LIMIT,
    SolverError,
    UndecidedError,
    fvs_branch_reduce,
    fvs_exact_exhaustive,
)
from .textio import (
    CertificationError,
    FormatError,
    parse_graph,
    trace_dumps,
    verify_trace,
    write_graph,
)

EXIT_FORMAT = 2
EXIT_PRECONDITION = 3
EXIT_CERTIFICATION = 4
EXIT_UNDECIDED = 5


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_reduce(args) -> int:
    inst = parse_graph(_read(args.input), k=args.k)
    result = run_pipeline(inst, args.target)
    _write(args.output, write_graph(result.instance))
    if args.trace:
        _write(args.trace, trace_dumps(result))
    if args.witness_out:
        w = result.instance.witness
        if w is None:
            raise PipelineError("target class carries no witness")
        relabel = {v: i + 1 for i, v in enumerate(sorted(result.instance.graph.vertices))}
        _write(args.witness_out, "h " + " ".join(str(relabel[v]) for v in w.order) + "\n")
    if args.svg_debug:
        for sr in result.stages:
            audit = sr.audit
            if hasattr(audit, "embedding"):
                emit_svg(audit.embedding, audit.routes, args.svg_debug)
                break
    return 0


def cmd_verify(args) -> int:
    trace = json.loads(_read(args.trace))
    try:
        out_k = trace["output"]["k"]
    except (KeyError, TypeError):
        raise FormatError("trace JSON missing output budget")
    out_inst = parse_graph(_read(args.graph), k=out_k)
    verify_trace(out_inst, trace)
    print("ok")
    return 0


def cmd_solve(args) -> int:
    inst = parse_graph(_read(args.input), k=args.k)
    g = inst.graph
    if g.n <= EXHAUSTIVE_LIMIT:
        sol = fvs_exact_exhaustive(g)
    else:
        sol = fvs_branch_reduce(g, time_budget=args.time_budget)
    print(f"opt {len(sol.deleted)}")
    print("s " + " ".join(str(v) for v in sorted(sol.deleted)))
    return 0


def cmd_gadget_check(args) -> int:
    gadget = build_gadget(args.kind, p=args.p)
    report = certify_gadget(gadget)
    print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fvskit")
    sub = ap.add_subparsers(dest="verb", required=True)

    red = sub.add_parser("reduce", help="compile an instance onto a target class")
    red.add_argument("input")
    red.add_argument("--target", required=True)
    red.add_argument("-o", "--output", default=None)
    red.add_argument("--trace", default=None)
    red.add_argument("--witness-out", default=None)
    red.add_argument("--k", type=int, default=0)
    red.add_argument("--seed", type=int, default=0)
    red.add_argument("--svg-debug", default=None)
    red.set_defaults(func=cmd_reduce)

    ver = sub.add_parser("verify", help="replay and check a reduction artifact")
    ver.add_argument("graph")
    ver.add_argument("--trace", required=True)
    ver.set_defaults(func=cmd_verify)

    sol = sub.add_parser("solve", help="exact minimum feedback vertex set")
    sol.add_argument("input")
    sol.add_argument("--k", type=int, default=0)
    sol.add_argument("--time-budget", type=float, default=None)
    sol.set_defaults(func=cmd_solve)

    gad = sub.add_parser("gadget-check", help="exhaustively certify a gadget")
    gad.add_argument("kind", choices=["R", "L", "D", "Y"])
    gad.add_argument("--p", type=int, default=None)
    gad.set_defaults(func=cmd_gadget_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except UndecidedError as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (PipelineError, GraphError, GeometryError, SolverError) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
