"""Command-line entry point.

Subcommands: count, construct, tumor-clean, reduce, optimize, verify.
All reports are deterministic JSON (sorted keys, fixed separators): the
same invocation always produces byte-identical output.

Exit codes: 0 success, 1 invariant violation, 2 bad input, 3 enumeration
budget exceeded.  The ODDCYCLE_BUDGET environment variable caps how many
subgraph copies any single count may visit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import counting, measures, pipeline, tumor
from .blowups import BlowupSpec, build_blowup
from .errors import BudgetExceededError, InvariantViolationError
from .graphs import graph_from_json, graph_to_json


def _dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _read_graph(path: str):
    with open(path) as fh:
        return graph_from_json(fh.read())


def _parse_vertex_list(raw: str) -> list[int]:
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"bad vertex list {raw!r}") from exc


def cmd_count(args) -> int:
    g, _, _ = _read_graph(args.graph)
    pat = counting.Pattern.parse(args.pattern)
    workers = args.threads if args.threads is not None else (os.cpu_count() or 1)
    print(counting.count_pattern(g, pat, workers=workers))
    return 0


def cmd_construct(args) -> int:
    spec = BlowupSpec(
        args.m,
        args.t,
        skeleton_edges=(args.variant == "b"),
        tumor_shape=args.tumor_shape,
    )
    tg = build_blowup(spec)
    _write(args.out, graph_to_json(tg.graph, tg.embedding, B=tg.B))
    return 0


def cmd_tumor_clean(args) -> int:
    g, emb, b_stored = _read_graph(args.graph)
    B = _parse_vertex_list(args.B) if args.B is not None else b_stored
    if B is None:
        raise ValueError("no anchor set: pass --B or store it in the graph file")
    tg = tumor.make_tumor(g, emb, B)
    audits = []
    for stage in (tumor.stage1, tumor.stage2, tumor.stage3):
        tg, audit = stage(tg, args.m, args.mode)
        audits.append(audit.to_dict())
    if args.audit_out is not None:
        _write(args.audit_out, _dump({"stages": audits}))
    _write(args.out, graph_to_json(tg.graph, tg.embedding, B=tg.B))
    return 0


def cmd_reduce(args) -> int:
    g, emb, b_stored = _read_graph(args.graph)
    B = _parse_vertex_list(args.B) if args.B is not None else b_stored
    report = pipeline.reduce(g, emb, args.m, B=B, mode=args.mode)
    _write(args.report, _dump(report.to_dict()))
    return 0


def cmd_optimize(args) -> int:
    report = measures.optimize(
        args.m,
        clique_size=args.clique if args.clique is not None else args.m + 3,
        starts=args.starts,
        max_iters=args.max_iters,
        tol=args.tol,
        seed=args.seed,
    )
    _write(args.out, _dump(report.to_dict()))
    return 0


def cmd_verify(args) -> int:
    with open(args.measure) as fh:
        mu = measures.measure_from_dict(json.load(fh))
    m = args.m
    kkt = measures.kkt_residual(mu, m, tol=args.kkt_tol)
    support_verts = sorted({v for e in mu.support() for v in e})
    rooted = {
        v: measures.check_rooted_path_bound(mu, m, v) for v in support_verts
    } if m >= 3 else {}
    bound, exact = measures.known_bound(m)
    value = measures.objective(mu, m)
    # the vertex bound divides by the objective; skip it for null measures
    vertex = (
        {v: measures.check_vertex_bound(mu, m, v) for v in support_verts}
        if value > 0 else {}
    )
    checks = {
        "value": value,
        "lambda": kkt.lam,
        "kkt_edge_residual": kkt.max_support_edge_residual,
        "kkt_vertex_residual": kkt.max_vertex_residual,
        "kkt_off_support_ok": kkt.off_support_ok,
        "rooted_path_ok": all(ok for _, _, ok in rooted.values()),
        "vertex_bound_ok": all(ok for _, ok in vertex.values()),
        "value_below_known_bound": value <= bound + 1e-9,
        "known_bound": bound,
        "known_bound_is_exact": exact,
    }
    _write(args.out, _dump(checks))
    ok = (
        kkt.max_support_edge_residual <= args.kkt_tol
        and kkt.max_vertex_residual <= args.kkt_tol
        and kkt.off_support_ok
        and checks["rooted_path_ok"]
        and checks["vertex_bound_ok"]
        and checks["value_below_known_bound"]
    )
    if not ok:
        raise InvariantViolationError("measure failed verification")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oddcycles")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("count", help="count copies of C_k or P_k in a graph")
    c.add_argument("--graph", required=True)
    c.add_argument("--pattern", required=True, help="e.g. C7 or P6")
    c.add_argument("--threads", type=int, default=None)
    c.set_defaults(fn=cmd_count)

    c = sub.add_parser("construct", help="build a blowup instance")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--variant", choices=["a", "b"], default="a")
    c.add_argument("--tumor-shape", choices=["path", "cycle"], default="path")
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_construct)

    c = sub.add_parser("tumor-clean", help="run the three cleaning stages")
    c.add_argument("--graph", required=True)
    c.add_argument("--B", default=None, help="comma-separated anchor vertices")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--mode", choices=["test", "fast"], default="test")
    c.add_argument("--audit-out", default=None)
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_tumor_clean)

    c = sub.add_parser("reduce", help="full chain: graph -> measure bound")
    c.add_argument("--graph", required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--B", default=None, help="anchors; omit to use the degree partition")
    c.add_argument("--mode", choices=["test", "fast"], default="test")
    c.add_argument("--report", default="-")
    c.set_defaults(fn=cmd_reduce)

    c = sub.add_parser("optimize", help="maximize the objective over measures")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--clique", type=int, default=None)
    c.add_argument("--starts", type=int, default=64)
    c.add_argument("--max-iters", type=int, default=4000)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_optimize)

    c = sub.add_parser("verify", help="check a measure against all certificates")
    c.add_argument("--measure", required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--kkt-tol", type=float, default=1e-6)
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_verify)

    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvariantViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
