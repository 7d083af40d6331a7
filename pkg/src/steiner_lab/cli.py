"""Command-line front end: ``steiner-lab <subcommand>``; JSON on stdout unless --out is given."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import coloring, io, lp_gadgets as lg
from .acceptance import AcceptanceConfig, run_acceptance
from .embeddings import DimReductionParams, LinearCode, measure_distortion, ulam_embed
from .errors import CapExceeded, SolverError, ValidationError
from .graphs import Graph
from .instances import CstInstance, DstInstance, instance_from_json
from .metric import format_p, parse_p
from .reduction import EmbeddabilityTuple, build_space, is_metric_compatible, is_steiner_embeddable
from .setsystems import SetSystem, SoundnessParams
from .solvers import CstToDstConfig, approx_cst_via_dst, cst_to_dst_facilities, exact_cst, exact_dst, mst_tree


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load(path):
    """Parse JSON from a file (or stdin for None / '-'); malformed input reports its location."""
    try:
        if path in (None, "-"):
            text = sys.stdin.read()
            where = "<stdin>"
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
            where = path
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {where} at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _emit(args, obj=None, csv_header=None, csv_rows=None):
    if getattr(args, "format", "json") == "csv" and csv_header is not None:
        io.write_text(io.to_csv(csv_header, csv_rows), args.out)
    else:
        io.write_text(io.dumps(obj), args.out)


def _sp(args) -> SoundnessParams:
    return SoundnessParams(args.eps, args.delta)


def _structure(obj, key, cls):
    try:
        return cls.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed {key} JSON: missing or bad field {exc}") from exc


# --- subcommands -------------------------------------------------------------


def cmd_gen_dst(args):
    sys_ = _structure(_load(args.system), "set system", SetSystem)
    if args.tuple:
        t = _structure(_load(args.tuple), "tuple", EmbeddabilityTuple)
        inst = build_space(sys_, t).dst_instance()
    else:
        p = parse_p(args.p)
        theta = args.theta if args.theta is not None else lg.optimal_theta(p, _sp(args))
        inst = lg.build_lp_dst_instance(sys_, lg.LpGadgetParams(p, theta))
    _emit(args, inst.to_json())


def cmd_gen_cst(args):
    graph = _structure(_load(args.graph), "graph", Graph)
    flips = None
    if args.random_orientation:
        flips = np.random.default_rng(args.seed).integers(0, 2, graph.m).astype(bool)
    inst, og = coloring.build_cst_instance(graph, flips)
    _emit(args, inst.to_json())


def cmd_gen_vc(args):
    graph = _structure(_load(args.graph), "graph", Graph)
    _emit(args, lg.build_vc_dst_instance(graph, args.metric).to_json())


def _load_instance(path):
    obj = _load(path)
    try:
        return instance_from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed instance JSON: missing or bad field {exc}") from exc


def cmd_solve(args):
    inst = _load_instance(args.instance)
    if args.mst:
        tree, method = mst_tree(inst.terminals, inst.metric), "mst"
    elif isinstance(inst, DstInstance):
        if args.via_dst:
            raise ValidationError("--via-dst applies to CST instances")
        tree, method = exact_dst(inst), "exact-dst"
    elif args.via_dst:
        cfg = CstToDstConfig(args.subset_cap, args.tol)
        tree, method = approx_cst_via_dst(inst.terminals, inst.metric, cfg), "via-dst"
    else:
        tree, method = exact_cst(inst, max_terminals=args.max_terminals), "exact-cst"
    report = {k: v for k, v in tree.info.items()}
    out = {"method": method, "cost": tree.cost, "tree": tree.to_json(), "report": report}
    rows = [(u, v) for u, v in tree.edges]
    _emit(args, out, ["u", "v"], rows)


def cmd_check_tuple(args):
    if args.file:
        t = _structure(_load(args.file), "tuple", EmbeddabilityTuple)
    elif args.p is not None and args.theta is not None:
        p = parse_p(args.p)
        if not lg.theta_valid(p, args.theta):
            raise ValidationError(f"theta={args.theta} is not valid for p={format_p(p)}")
        t = lg.lp_tuple(p, args.theta)
    else:
        raise ValidationError("check-tuple needs --file/--tuple or both --p and --theta")
    mc = is_metric_compatible(t)
    se = is_steiner_embeddable(t)
    out = {
        "metric_compatible": mc.ok,
        "steiner_embeddable": se.ok,
        "status": se.status,
        "violations": se.violations + se.boundary,
    }
    _emit(args, out)


def cmd_gap_report(args):
    sp = _sp(args)
    rows = []
    for raw in args.p:
        p = parse_p(raw)
        if args.theta is not None:
            rep = {"p": p, "theta": args.theta, "gap": lg.lp_gap_factor(p, args.theta, sp)}
        else:
            rep = lg.gap_report(p, sp)
        rep["p"] = format_p(p)
        rows.append(rep)
    obj = rows[0] if len(rows) == 1 else rows
    _emit(args, obj, ["p", "theta", "gap"], [(r["p"], r["theta"], r["gap"]) for r in rows])


def cmd_embed(args):
    if args.bits is not None:
        bits = [int(c) for c in args.bits.strip()]
        _emit(args, {"bits": args.bits, "permutation": list(ulam_embed(bits, args.separators))})
        return
    if not (args.code and args.instance):
        raise ValidationError("embed needs --bits, or --code together with --instance")
    code = _structure(_load(args.code), "code", LinearCode)
    inst = _load_instance(args.instance)
    params = DimReductionParams(code, args.support, args.bound)
    rep = measure_distortion(inst.all_points(), inst.metric.p, params)
    if args.format == "csv":
        io.write_text(rep.to_csv(), args.out)
    else:
        _emit(args, rep.to_json())


def cmd_reduce_cst_dst(args):
    inst = _load_instance(args.instance)
    if not isinstance(inst, CstInstance):
        raise ValidationError("reduce-cst-dst expects a CST instance (no facilities key)")
    X = cst_to_dst_facilities(inst.terminals, inst.metric, CstToDstConfig(args.subset_cap, args.tol))
    _emit(args, DstInstance(inst.metric, inst.terminals, inst.root_index, X).to_json())


def cmd_accept(args):
    results = run_acceptance(args.filter, AcceptanceConfig(seed=args.seed, theta=args.theta))
    for r in results:
        print(r.line(), file=sys.stderr)
    obj = {"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}
    _emit(args, obj, ["id", "name", "passed", "detail"], [(r.id, r.name, r.passed, r.detail) for r in results])
    return 0 if obj["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="steiner-lab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt=False):
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        return p

    p = common(sub.add_parser("gen-dst", help="ℓp (or abstract set-system) DST instance from a set system"))
    p.add_argument("--system", required=True)
    p.add_argument("--p", default="2")
    p.add_argument("--theta", type=float)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--tuple", help="tuple JSON; emits the weighted set-system space instead")
    p.set_defaults(fn=cmd_gen_dst)

    p = common(sub.add_parser("gen-cst", help="ℓ∞ coloring gadget from a graph"))
    p.add_argument("--graph", required=True)
    p.add_argument("--random-orientation", action="store_true")
    p.set_defaults(fn=cmd_gen_cst)

    p = common(sub.add_parser("gen-vc", help="vertex-cover DST gadget"))
    p.add_argument("--graph", required=True)
    p.add_argument("--metric", choices=("l1", "hamming"), default="l1")
    p.set_defaults(fn=cmd_gen_vc)

    p = common(sub.add_parser("solve", help="solve a DST/CST instance"), fmt=True)
    p.add_argument("instance", nargs="?", default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--mst", action="store_true")
    g.add_argument("--via-dst", action="store_true")
    p.add_argument("--subset-cap", type=int, default=3)
    p.add_argument("--max-terminals", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(fn=cmd_solve)

    p = common(sub.add_parser("check-tuple", help="metric compatibility and Steiner embeddability"))
    p.add_argument("--file", "--tuple", dest="file")
    p.add_argument("--p")
    p.add_argument("--theta", type=float)
    p.set_defaults(fn=cmd_check_tuple)

    p = common(sub.add_parser("gap-report", help="inapproximability factor of the ℓp reduction"), fmt=True)
    p.add_argument("--p", nargs="+", default=["inf"])
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--theta", type=float)
    p.set_defaults(fn=cmd_gap_report)

    p = common(sub.add_parser("embed", help="Ulam embedding of a bit string, or code-based distortion report"), fmt=True)
    p.add_argument("--bits")
    p.add_argument("--separators", type=int, default=1)
    p.add_argument("--code")
    p.add_argument("--instance")
    p.add_argument("--support", type=int, default=3)
    p.add_argument("--bound", type=float, default=1.0)
    p.set_defaults(fn=cmd_embed)

    p = common(sub.add_parser("reduce-cst-dst", help="harvest facilities for a CST instance"))
    p.add_argument("instance", nargs="?", default=None)
    p.add_argument("--subset-cap", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(fn=cmd_reduce_cst_dst)

    p = common(sub.add_parser("accept", help="run the acceptance criteria"), fmt=True)
    p.add_argument("--filter")
    p.add_argument("--theta", type=float)
    p.set_defaults(fn=cmd_accept)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CapExceeded, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
