"""Command-line front end: solve / bench / check.

Exit codes are the machine contract: 0 success, 1 usage or configuration
error, 2 non-convergence (iteration cap), 3 failed invariant suite.
stdout carries only data (solution CSV, aggregate table, suite results);
diagnostics go to stderr.
"""

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import bench as bench_mod
from . import checks
from .penalty import PenaltySpec
from .wlasso import Problem, AdmmConfig, AdmmCapError, objective, solve_admm
from .irl1 import StopRule, InnerSolveError, run_irl1_admm, run_irl1_ist


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _build_parser():
    parser = _Parser(prog="relasso",
                     description="Sparse recovery via reweighted l1 solvers.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    ps = sub.add_parser("solve", help="solve one instance from CSV inputs")
    ps.add_argument("--matrix", required=True, help="CSV file with A (m x n)")
    ps.add_argument("--y", required=True, help="CSV file with y (length m)")
    ps.add_argument("--algo", required=True,
                    choices=("lasso", "irl1-admm", "irl1-ist"))
    ps.add_argument("--penalty", default="none",
                    choices=("log", "lq", "mcp", "none"))
    ps.add_argument("--lambda", dest="lam", type=float, default=1e-5)
    ps.add_argument("--eps", type=float, default=0.1)
    ps.add_argument("--q", type=float, default=0.5)
    ps.add_argument("--alpha", type=float, default=2.0)
    ps.add_argument("--tau", type=float, default=0.25)
    ps.add_argument("--delta", type=float, default=1e-5)
    ps.add_argument("--max-outer", type=int, default=100)

    pb = sub.add_parser("bench", help="run the benchmark grid")
    pb.add_argument("--config", help="JSON config (defaults when omitted)")
    pb.add_argument("--out", required=True, help="output CSV path")
    pb.add_argument("--trials", type=int, help="override trial count")

    pc = sub.add_parser("check", help="run invariant suites")
    pc.add_argument("--suite", action="append",
                    help="run only this suite (repeatable)")
    return parser


def _load_vector(path, name):
    try:
        arr = np.loadtxt(path, delimiter=",", dtype=float, ndmin=1)
    except OSError as e:
        raise OSError(f"cannot read {name} from {path}: {e}") from e
    return arr


def _print_solution(x):
    for v in x:
        print(f"{v:.17g}")


def cmd_solve(args):
    A = np.atleast_2d(_load_vector(args.matrix, "matrix"))
    y = _load_vector(args.y, "y")
    p = Problem(A, y, args.lam)

    if args.algo == "lasso":
        try:
            sol = solve_admm(p, np.ones(p.n))
        except AdmmCapError as e:
            print(f"iteration cap reached: {e}", file=sys.stderr)
            return 2
        w = np.ones(p.n)
        print(f"iterations: {sol.iters}", file=sys.stderr)
        print(f"final step norm: {sol.dual_res / AdmmConfig().rho:.6g}",
              file=sys.stderr)
        print(f"final objective: {objective(p, w, sol.x):.12g}",
              file=sys.stderr)
        _print_solution(sol.x)
        return 0

    if args.penalty == "none":
        raise ValueError("--penalty must be log, lq or mcp for reweighted "
                         "algorithms")
    spec = PenaltySpec(args.penalty, eps=args.eps, q=args.q,
                       alpha=args.alpha,
                       beta=args.alpha if args.penalty == "mcp" else 1e3)
    stop = StopRule(args.delta, args.max_outer)
    try:
        if args.algo == "irl1-admm":
            res = run_irl1_admm(p, spec, stop=stop)
        else:
            res = run_irl1_ist(p, spec, tau=args.tau, stop=stop)
    except InnerSolveError as e:
        print(f"inner solver hit its cap: {e}", file=sys.stderr)
        return 2
    t = res.trace
    print(f"outer iterations: {t.outer_iters}", file=sys.stderr)
    final_step = t.step_norms[-1] if len(t.step_norms) else float("nan")
    print(f"final step norm: {final_step:.6g}", file=sys.stderr)
    final_f = t.f_values[-1] if len(t.f_values) else float("nan")
    print(f"final F: {final_f:.12g}", file=sys.stderr)
    _print_solution(res.x_hat)
    return 0 if res.converged else 2


def cmd_bench(args):
    cfg = bench_mod.load_config(args.config) if args.config \
        else bench_mod.BenchConfig()
    if args.trials is not None:
        cfg = replace(cfg, trials=args.trials)
    records = bench_mod.run_bench(cfg)
    bench_mod.write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    head = f"{'algorithm':<10} {'penalty':<7} {'k':>3} {'recovery':>8} " \
           f"{'mean_rse':>12} {'mean_iters':>11} {'errors':>6}"
    print(head)
    for row in bench_mod.aggregate(records):
        print(f"{row['algorithm']:<10} {row['penalty']:<7} {row['k']:>3d} "
              f"{row['recovery_rate']:>8.2f} {row['mean_rse']:>12.5g} "
              f"{row['mean_inner_iters']:>11.1f} {row['errors']:>6d}")
    return 0


def cmd_check(args):
    results = checks.run_suites(args.suite)
    failed = False
    for name, ok, message in results:
        if ok:
            print(f"PASS {name}")
        else:
            failed = True
            print(f"FAIL {name}: {message}")
    return 3 if failed else 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handler = {"solve": cmd_solve, "bench": cmd_bench,
               "check": cmd_check}[args.subcommand]
    try:
        return handler(args)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (AdmmCapError, InnerSolveError) as e:
        print(f"did not converge: {e}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
