"""Command-line interface: generate / factorize / check / benchmark."""

from __future__ import annotations

import argparse
import os
import sys

from . import harness, instances, model
from .cd import CdConfig
from .fpgm import FpgmConfig
from .model import RankProfile

SOLVERS = ("fpgm", "cd-cyclic", "cd-gs")


def _add_budget_flags(p):
    p.add_argument("--time", type=float, default=None, metavar="SEC",
                   help="wall-clock budget per run, seconds")
    p.add_argument("--iters", type=int, default=None, metavar="COUNT",
                   help="outer-alternation budget per run (deterministic)")


def _add_solver_flags(p):
    p.add_argument("--solver", choices=SOLVERS, default="cd-gs")
    p.add_argument("--rank", default="auto",
                   help="inner rank per factor: an integer, or 'auto' for k "
                        "(1 gives the rank-one square-root mode)")
    p.add_argument("--delta", type=float, default=5.0,
                   help="FPGM inner steps per unit of k")
    p.add_argument("--alpha", type=float, default=0.5,
                   help="Gauss-Southwell updates per factor, relative to k*r")
    p.add_argument("--symmetric", action="store_true",
                   help="couple the two sides with a symmetry penalty (CD only)")
    p.add_argument("--gamma", type=float, default=1.0,
                   help="symmetry penalty weight (with --symmetric)")
    p.add_argument("--mask", default=None, metavar="FILE",
                   help="JSON file of pinned factor entries (CD only)")
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=0.0,
                   help="stop a run once its relative error reaches this")


def _build_config(args):
    if args.time is None and args.iters is None:
        raise ValueError("set a budget with --time or --iters")
    if args.solver == "fpgm":
        if args.mask is not None:
            raise ValueError("--mask requires a coordinate-descent solver; "
                             "FPGM cannot hold entries fixed")
        if args.symmetric:
            raise ValueError("--symmetric requires a coordinate-descent solver")
        return FpgmConfig(delta=args.delta, time_budget_s=args.time,
                          max_outer=args.iters, outer_tol=args.tol, seed=args.seed)
    mask = model.load_mask(args.mask) if args.mask else None
    return CdConfig(
        variant="cyclic" if args.solver == "cd-cyclic" else "gauss_southwell",
        alpha=args.alpha,
        gamma=args.gamma if args.symmetric else 0.0,
        mask=mask,
        time_budget_s=args.time,
        max_outer=args.iters,
        outer_tol=args.tol,
        seed=args.seed,
    )


def _profile_for(args, inst, k):
    if args.rank == "auto":
        r = k
    else:
        r = int(args.rank)
    return RankProfile.uniform(inst.m, inst.n, k, r)


def _cmd_generate(args):
    inst = instances.generate(args.family, args.n)
    model.save_matrix_csv(args.out, inst)
    print(f"wrote {inst.name}: {inst.m}x{inst.n} matrix -> {args.out} "
          f"(suggested k = {instances.default_k(args.family, args.n)})")
    return 0


def _cmd_factorize(args):
    inst = model.load_matrix_csv(args.input)
    config = _build_config(args)
    profile = _profile_for(args, inst, args.k)
    report = harness.multi_start(inst, profile, config, args.restarts,
                                 jobs=args.jobs)
    best = report.best
    model.save_factors(args.out, best.factors, name=inst.name)
    if args.trace:
        best.trace.write_csv(args.trace)
    print(f"{inst.name}: best of {args.restarts} run(s) with {config.label}: "
          f"relative error {best.rel_error:.6e} (seed {best.seed}) -> {args.out}")
    return 0


def _cmd_check(args):
    inst = model.load_matrix_csv(args.input)
    _, factors = model.load_factors(args.factors)
    report = model.verify_factorization(inst, factors, args.tol)
    print(f"{inst.name}: {report.summary()}")
    return 0 if report.passed else 1


def _cmd_benchmark(args):
    config = _build_config(args)
    if args.suite != "table1":
        raise ValueError(f"unknown suite {args.suite!r}")
    reports = harness.benchmark_suite(config, args.restarts, jobs=args.jobs)
    if args.out:
        harness.save_reports(args.out, reports)
    print(f"{'instance':>8}  {'solver':>9}  {'best rel. error':>15}")
    for rep in reports:
        print(f"{rep.instance_name:>8}  {rep.solver:>9}  {rep.best.rel_error:15.6e}")
    if args.out:
        print(f"report -> {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="psdfact",
        description="Positive semidefinite factorization of nonnegative matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a benchmark matrix as CSV")
    p.add_argument("--family", choices=instances.FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("factorize", help="factorize a CSV matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True, help="PSD factor size")
    p.add_argument("--out", required=True, help="output factor file (JSON)")
    p.add_argument("--trace", default=None, help="best run's error trace (CSV)")
    p.add_argument("--jobs", type=int, default=os.cpu_count(),
                   help="parallel restarts (default: all cores)")
    _add_solver_flags(p)
    _add_budget_flags(p)
    p.set_defaults(func=_cmd_factorize)

    p = sub.add_parser("check", help="verify a factor file against a matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--factors", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("benchmark", help="run the built-in instance suite")
    p.add_argument("--suite", default="table1")
    p.add_argument("--out", default=None, help="JSON report path")
    p.add_argument("--jobs", type=int, default=os.cpu_count())
    _add_solver_flags(p)
    _add_budget_flags(p)
    p.set_defaults(func=_cmd_benchmark)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
