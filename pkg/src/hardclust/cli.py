"""Command-line front end.

Subcommands: gen, reduce, lift, solve, verify, analyze.  Exit codes:
0 success, 1 a verification check failed, 2 usage or input errors.
Reports are TSV with a header row and trailing #key=value metadata
lines; identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .approx import pipeline_below2, pipeline_one_plus_eps, two_approx_enumerate
from .coverage import SetSystem, random_uniform_system, structure_stats
from .gadgets import (
    build_gadget,
    completeness_certificate,
    generate_no_graph,
    generate_yes_graph,
    global_soundness_lb,
    orient_edges,
)
from .instances import (
    InstanceFormatError,
    Loaded,
    finite_metric_payload,
    gadget_payload,
    graph_payload,
    johnson_payload,
    load_instance,
    points_payload,
    setsystem_payload,
    vertex_sets_payload,
    write_instance,
)
from .johnson import (
    WeightedHypergraphAssignment,
    cov_johnson,
    hypergraph_lemma_check,
    indicator_embed,
)
from .lifting import LiftParams, coverage_transfer_experiment, lift
from .metrics import CapExceeded, FiniteMetric, PointSet, brute_force_cluster
from .minsum import (
    build_minsum_instance,
    minsum_constants,
    minsum_gap_experiment,
    soundness_residual,
)

DEFAULT_SEED = 0


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _write_report(path, header, rows, meta) -> None:
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(_fmt(x) for x in row))
    for key in meta:
        lines.append(f"#{key}={_fmt(meta[key])}")
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _resolve_seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("HARDCLUST_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InstanceFormatError(f"HARDCLUST_SEED is not an integer: {env!r}") from exc
    return DEFAULT_SEED


def _need(loaded: Loaded, kind: str):
    if loaded.kind != kind:
        raise InstanceFormatError(f"expected a {kind} instance, got {loaded.kind}")
    return loaded.payload


def _resolve_k(args, loaded: Loaded) -> int:
    if getattr(args, "k", None) is not None:
        return args.k
    if loaded.k is not None:
        return loaded.k
    raise InstanceFormatError("no k: pass --k or store k in the instance")


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed)
    rng = np.random.default_rng(seed)
    if args.what == "points":
        pts = rng.uniform(-1.0, 1.0, size=(args.n, args.dim))
        if args.metric == "hamming":
            pts = (pts > 0).astype(float)
        ps = PointSet(dim=args.dim, points=pts, metric=args.metric)
        write_instance(args.out, points_payload(ps, args.k))
    elif args.what == "setsystem":
        sys_ = random_uniform_system(args.n, args.sets, args.size, rng)
        write_instance(args.out, setsystem_payload(sys_, args.k))
    elif args.what == "graph":
        edges = [
            (u, v)
            for u in range(args.n)
            for v in range(u + 1, args.n)
            if rng.random() < args.p
        ]
        write_instance(args.out, graph_payload(orient_edges(args.n, edges)))
    elif args.what == "yes-graph":
        graph, sets = generate_yes_graph(args.n, args.q, args.eps, seed, p=args.p)
        write_instance(args.out, graph_payload(graph))
        if args.cert_out:
            write_instance(args.cert_out, vertex_sets_payload(sets))
    elif args.what == "no-graph":
        graph = generate_no_graph(args.n, args.max_alpha, seed)
        write_instance(args.out, graph_payload(graph))
    else:  # johnson
        inst = cov_johnson(args.n, args.z)
        write_instance(args.out, johnson_payload(inst, args.k))
    return 0


def _cmd_reduce(args) -> int:
    if args.what == "minsum":
        loaded = load_instance(args.infile)
        sys_ = _need(loaded, "setsystem")
        fm = build_minsum_instance(sys_)
        write_instance(args.out, finite_metric_payload(fm, loaded.k))
    elif args.what == "linf":
        loaded = load_instance(args.graph)
        graph = _need(loaded, "graph")
        gadget = build_gadget(graph, args.variant)
        if args.cert:
            gadget.independent_sets = _need(load_instance(args.cert), "vertex_sets")
        k = len(gadget.independent_sets) if gadget.independent_sets else None
        write_instance(args.out, gadget_payload(gadget, k))
    else:  # johnson
        loaded = load_instance(args.infile)
        inst = _need(loaded, "johnson")
        metric = "l2" if args.norm == "l2" else "l1"
        ps = indicator_embed(inst.sets, inst.n, metric=metric)
        write_instance(args.out, points_payload(ps, loaded.k))
    return 0


def _cmd_lift(args) -> int:
    loaded = load_instance(args.infile)
    sys_ = _need(loaded, "setsystem")
    seed = _resolve_seed(args.seed)
    rep = lift(sys_, LiftParams(B=args.B, a=args.a, t=args.t, seed=seed))
    write_instance(args.out, setsystem_payload(rep.lifted, loaded.k))
    header = [
        "n_lifted", "m_lifted", "deleted", "girth_achieved",
        "max_degree", "pre_deletion_degrees_ok", "expected_cycle_bound",
        "deletion_budget",
    ]
    row = [
        rep.lifted.n, len(rep.lifted.sets), rep.deleted, rep.girth_achieved,
        rep.max_degree, rep.pre_deletion_degrees_ok, rep.expected_cycle_bound,
        rep.deletion_budget,
    ]
    _write_report(
        args.report, header, [row],
        {"seed": seed, "version": __version__,
         "caps": f"B={args.B},a={args.a},t={args.t}"},
    )
    return 0


def _cmd_solve(args) -> int:
    loaded = load_instance(args.infile)
    seed = _resolve_seed(args.seed)
    k = _resolve_k(args, loaded)
    objective = args.objective
    if loaded.kind == "gadget":
        instance = loaded.payload.points
    else:
        instance = loaded.payload
    rows = []
    if args.algo == "exact":
        if isinstance(instance, FiniteMetric) and objective != "minsum":
            _, cost = brute_force_cluster(instance, k, objective, mode="datapoints")
        else:
            _, cost = brute_force_cluster(instance, k, objective, mode="continuous")
    elif args.algo == "datapoints":
        _, cost = two_approx_enumerate(instance, k, objective)
    elif args.algo == "epsnet":
        cost = pipeline_one_plus_eps(instance, k, args.eps, objective).cost
    else:  # coreset
        cost = pipeline_below2(instance, k, objective, s=args.s, seed=seed).cost
    rows.append([args.algo, objective, k, len(instance), cost])
    _write_report(
        args.report, ["algo", "objective", "k", "n", "cost"], rows,
        {"seed": seed, "version": __version__, "caps": f"eps={args.eps},s={args.s}"},
    )
    sys.stdout.write(f"cost {_fmt(cost)}\n")
    return 0


def _cmd_verify(args) -> int:
    failures = 0
    if args.what == "gap":
        loaded = load_instance(args.infile)
        gadget = _need(loaded, "gadget")
        r = args.r if args.r is not None else (loaded.k or 2)
        res = global_soundness_lb(gadget, r, args.objective)
        rows = [["matching_lb", res.lower_bound, res.exact_cost, res.bound_holds]]
        if not res.bound_holds:
            failures += 1
        if gadget.independent_sets:
            cost, _ = completeness_certificate(
                gadget, gadget.independent_sets, args.objective
            )
            # the exact optimum can never exceed a specific clustering's cost
            ok = res.exact_cost <= cost + 1e-9
            if not ok:
                failures += 1
            rows.append(["completeness_ub", cost, res.exact_cost, ok])
        _write_report(
            args.report, ["check", "value", "exact_cost", "ok"], rows,
            {"seed": DEFAULT_SEED, "version": __version__,
             "caps": f"r={r},objective={args.objective}"},
        )
    elif args.what == "lemma":
        seed = _resolve_seed(args.seed)
        rng = np.random.default_rng(seed)
        premise_hits = 0
        violations = 0
        eps_grid = (0.05, 0.1, 0.2, 0.3, 0.4)
        for _ in range(args.trials):
            r = int(rng.integers(1, 4))
            n = int(rng.integers(r + 1, 11))
            m = int(rng.integers(1, 13))
            hg = random_uniform_system(n, m, r, rng)
            x = rng.uniform(0.0, 0.5, size=n)
            eps = float(eps_grid[int(rng.integers(0, len(eps_grid)))])
            res = hypergraph_lemma_check(
                WeightedHypergraphAssignment(hypergraph=hg, x=x), eps, args.norm
            )
            if res.premise_all:
                premise_hits += 1
                if not res.bound_holds:
                    violations += 1
        if violations:
            failures += 1
        _write_report(
            args.report,
            ["trials", "premise_hits", "violations"],
            [[args.trials, premise_hits, violations]],
            {"seed": seed, "version": __version__, "caps": f"norm={args.norm}"},
        )
    elif args.what == "minsum":
        loaded = load_instance(args.infile)
        sys_ = _need(loaded, "setsystem")
        k = _resolve_k(args, loaded)
        cert = None
        if args.cert:
            cert = _need(load_instance(args.cert), "vertex_sets")
        rep = minsum_gap_experiment(sys_, k, cert)
        rows = [["gap_ratio", rep.soundness_lb, rep.completeness_ub, rep.ratio <= 1 + 1e-9]]
        if rep.ratio > 1 + 1e-9:
            failures += 1
        for cl in rep.details["clusters"]:
            ok = (not cl["acyclic"]) or cl["cost"] >= cl["charge_bound"] - 1e-9
            rows.append(["charge_bound", cl["cost"], cl["charge_bound"], ok])
            if not ok:
                failures += 1
        _write_report(
            args.report, ["check", "value", "reference", "ok"], rows,
            {"seed": DEFAULT_SEED, "version": __version__, "caps": f"k={k}"},
        )
    else:  # lift
        loaded = load_instance(args.infile)
        sys_ = _need(loaded, "setsystem")
        seed = _resolve_seed(args.seed)
        rep = lift(sys_, LiftParams(B=args.B, a=args.a, t=args.t, seed=seed))
        checks = [
            ("girth_achieved", rep.girth_achieved),
            ("pre_deletion_degrees", rep.pre_deletion_degrees_ok),
            ("deletions_within_budget", rep.deleted <= rep.deletion_budget),
        ]
        failures += sum(1 for _, ok in checks if not ok)
        _write_report(
            args.report, ["check", "ok"], [[c, ok] for c, ok in checks],
            {"seed": seed, "version": __version__,
             "caps": f"B={args.B},a={args.a},t={args.t}"},
        )
    sys.stdout.write("FAIL\n" if failures else "OK\n")
    return 1 if failures else 0


def _cmd_analyze(args) -> int:
    if args.what == "minsum-constants":
        cst = minsum_constants()
        rows = [
            ["c", cst.c],
            ["residual", soundness_residual(cst.c)],
            ["d1", cst.d1],
            ["d2", cst.d2],
            ["threshold", cst.threshold],
            ["mass", cst.mass],
            ["integral", cst.integral],
            ["gap_ratio", cst.gap_ratio],
        ]
        _write_report(
            args.report, ["constant", "value"], rows,
            {"seed": DEFAULT_SEED, "version": __version__, "caps": "none"},
        )
    elif args.what == "structure":
        loaded = load_instance(args.infile)
        sys_ = _need(loaded, "setsystem")
        st = structure_stats(sys_)
        girth = "inf" if math.isinf(st.girth) else int(st.girth)
        rows = [[
            st.max_element_degree, st.max_set_size,
            st.max_pairwise_intersection, girth,
        ]]
        _write_report(
            args.report,
            ["max_element_degree", "max_set_size", "max_pairwise_intersection", "girth"],
            rows,
            {"seed": DEFAULT_SEED, "version": __version__,
             "caps": f"girth_cap={st.girth_cap}"},
        )
    else:  # transfer
        loaded = load_instance(args.infile)
        sys_ = _need(loaded, "setsystem")
        k = _resolve_k(args, loaded)
        seed = _resolve_seed(args.seed)
        seeds = [seed + i for i in range(args.trials)]
        rep = coverage_transfer_experiment(sys_, args.B, args.a, args.t, k, seeds)
        rows = [[s, rep.original_fraction, frac, deleted]
                for s, frac, deleted in rep.rows]
        rows.append(["max_abs_diff", rep.max_abs_diff, "", ""])
        _write_report(
            args.report,
            ["seed", "original_fraction", "lifted_fraction", "deleted"],
            rows,
            {"seed": seed, "version": __version__,
             "caps": f"B={args.B},a={args.a},t={args.t},k={k}"},
        )
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hardclust")
    p.add_argument("--version", action="version", version=f"hardclust {__version__}")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker count; results never depend on it")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate instances")
    gs = g.add_subparsers(dest="what", required=True)
    gp = gs.add_parser("points")
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--dim", type=int, required=True)
    gp.add_argument("--metric", default="linf")
    gp.add_argument("--k", type=int)
    gt = gs.add_parser("setsystem")
    gt.add_argument("--n", type=int, required=True)
    gt.add_argument("--sets", type=int, required=True)
    gt.add_argument("--size", type=int, required=True)
    gt.add_argument("--k", type=int)
    gg = gs.add_parser("graph")
    gg.add_argument("--n", type=int, required=True)
    gg.add_argument("--p", type=float, default=0.5)
    gy = gs.add_parser("yes-graph")
    gy.add_argument("--n", type=int, required=True)
    gy.add_argument("--q", type=int, required=True)
    gy.add_argument("--eps", type=float, required=True)
    gy.add_argument("--p", type=float, default=0.5)
    gy.add_argument("--cert-out")
    gn = gs.add_parser("no-graph")
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--max-alpha", type=float, required=True)
    gj = gs.add_parser("johnson")
    gj.add_argument("--n", type=int, required=True)
    gj.add_argument("--z", type=int, required=True)
    gj.add_argument("--k", type=int)
    for sp in (gp, gt, gg, gy, gn, gj):
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", required=True)

    r = sub.add_parser("reduce", help="apply a reduction")
    rs = r.add_subparsers(dest="what", required=True)
    rm = rs.add_parser("minsum")
    rm.add_argument("--in", dest="infile", required=True)
    rm.add_argument("--out", required=True)
    rl = rs.add_parser("linf")
    rl.add_argument("--graph", required=True)
    rl.add_argument("--variant", choices=("standard", "lattice"), default="standard")
    rl.add_argument("--cert")
    rl.add_argument("--out", required=True)
    rj = rs.add_parser("johnson")
    rj.add_argument("--in", dest="infile", required=True)
    rj.add_argument("--norm", choices=("l1", "l2"), default="l2")
    rj.add_argument("--out", required=True)

    li = sub.add_parser("lift", help="girth-lift a uniform set system")
    li.add_argument("--in", dest="infile", required=True)
    li.add_argument("--B", type=int, required=True)
    li.add_argument("--a", type=int, required=True)
    li.add_argument("--t", type=int, required=True)
    li.add_argument("--seed", type=int)
    li.add_argument("--out", required=True)
    li.add_argument("--report")

    so = sub.add_parser("solve", help="run a clustering algorithm")
    so.add_argument("--in", dest="infile", required=True)
    so.add_argument("--algo", choices=("exact", "datapoints", "epsnet", "coreset"),
                    required=True)
    so.add_argument("--objective", choices=("median", "means", "minsum"),
                    default="median")
    so.add_argument("--k", type=int)
    so.add_argument("--eps", type=float, default=0.5)
    so.add_argument("--s", type=int, default=40)
    so.add_argument("--seed", type=int)
    so.add_argument("--report")

    ve = sub.add_parser("verify", help="run certificate checks")
    vs = ve.add_subparsers(dest="what", required=True)
    vg = vs.add_parser("gap")
    vg.add_argument("--in", dest="infile", required=True)
    vg.add_argument("--r", type=int)
    vg.add_argument("--objective", choices=("median", "means"), default="means")
    vg.add_argument("--report")
    vl = vs.add_parser("lemma")
    vl.add_argument("--norm", choices=("l1", "l2"), required=True)
    vl.add_argument("--trials", type=int, default=1000)
    vl.add_argument("--seed", type=int)
    vl.add_argument("--report")
    vm = vs.add_parser("minsum")
    vm.add_argument("--in", dest="infile", required=True)
    vm.add_argument("--k", type=int)
    vm.add_argument("--cert")
    vm.add_argument("--report")
    vf = vs.add_parser("lift")
    vf.add_argument("--in", dest="infile", required=True)
    vf.add_argument("--B", type=int, required=True)
    vf.add_argument("--a", type=int, required=True)
    vf.add_argument("--t", type=int, required=True)
    vf.add_argument("--seed", type=int)
    vf.add_argument("--report")

    an = sub.add_parser("analyze", help="compute reports")
    ans = an.add_subparsers(dest="what", required=True)
    am = ans.add_parser("minsum-constants")
    am.add_argument("--report")
    ast = ans.add_parser("structure")
    ast.add_argument("--in", dest="infile", required=True)
    ast.add_argument("--report")
    at = ans.add_parser("transfer")
    at.add_argument("--in", dest="infile", required=True)
    at.add_argument("--B", type=int, required=True)
    at.add_argument("--a", type=int, required=True)
    at.add_argument("--t", type=int, required=True)
    at.add_argument("--k", type=int)
    at.add_argument("--trials", type=int, default=3)
    at.add_argument("--seed", type=int)
    at.add_argument("--report")
    return p


_DISPATCH = {
    "gen": _cmd_gen,
    "reduce": _cmd_reduce,
    "lift": _cmd_lift,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "analyze": _cmd_analyze,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return _DISPATCH[args.command](args)
    except json.JSONDecodeError as exc:
        sys.stderr.write(
            f"error: malformed JSON at line {exc.lineno} column {exc.colno}\n"
        )
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (InstanceFormatError, CapExceeded, ValueError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
