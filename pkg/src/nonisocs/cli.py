"""Command-line front end for the experiments and checks.

Every subcommand is a thin adapter over a library call; `--seed` is required
wherever randomness is involved so each run is reproducible from its command
line. Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from nonisocs.harness import (
    SweepConfig,
    dist_name,
    estimate_plain_threshold,
    estimate_threshold_from_curve,
    model_from_name,
    read_sweep_csv,
    run_support_recovery_experiment,
    run_sweep,
    run_weighted_threshold_experiment,
    write_sweep_csv,
)
from nonisocs.pipeline import RecoveryConfig, recover_two_stage
from nonisocs.sampling import SeedSpec, derive_stream
from nonisocs.sensing import apply_column_weights, gen_gaussian_matrix, gen_weight_diagonal
from nonisocs.signals import gen_sparse_signal, squared_error
from nonisocs.solver import basis_pursuit
from nonisocs.svgplot import write_success_curves_svg
from nonisocs.theory import check_null_space_condition, scaling_law_C, verify_stability_bounds


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise _UsageError(message)


def _default_threads() -> int:
    return os.cpu_count() or 1


def _add_common(p: _Parser, *, trials: bool = True):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="master seed (required)")
    if trials:
        p.add_argument("--trials", type=int, required=True)


def _build_parser() -> _Parser:
    parser = _Parser(prog="nonisocs")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sweep", help="Monte-Carlo success-rate sweep over a sparsity grid")
    _add_common(p)
    p.add_argument("--dist", choices=["rademacher", "gauss"], required=True)
    p.add_argument("--alg", choices=["plain", "two-stage"], required=True)
    p.add_argument("--omega", type=float, default=3.0)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--k-step", type=int, default=1)
    p.add_argument("--matrix-mode", choices=["fresh_per_trial", "fixed_per_k"],
                   default="fresh_per_trial")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("solve", help="single recovery instance, prints the squared error")
    _add_common(p, trials=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--dist", choices=["rademacher", "gauss"], required=True)
    p.add_argument("--alg", choices=["plain", "two-stage"], required=True)
    p.add_argument("--omega", type=float, default=3.0)

    p = sub.add_parser("support-recovery", help="mean support overlap vs sparsity excess")
    _add_common(p)
    p.add_argument("--dist", choices=["rademacher", "gauss"], required=True)
    p.add_argument("--eps-grid", required=True,
                   help="comma-separated epsilon0 values, e.g. 0.05,0.1,0.2,0.3")
    p.add_argument("--k0", type=float, default=None,
                   help="plain-l1 threshold in index counts; estimated when omitted")

    p = sub.add_parser("weighted-threshold", help="planted-support weighted-l1 success rate")
    _add_common(p)
    p.add_argument("--gamma1", type=float, required=True)
    p.add_argument("--f1", type=float, required=True)
    p.add_argument("--f2", type=float, required=True)
    p.add_argument("--omega", type=float, default=3.0)

    p = sub.add_parser("check-stability", help="Monte-Carlo check of the stability bounds")
    _add_common(p)
    p.add_argument("--varpi", type=float, required=True)
    p.add_argument("--threshold", type=float, default=None,
                   help="plain-l1 threshold in k/n units; estimated when omitted")

    p = sub.add_parser("check-nullspace", help="null-space condition on one seeded instance")
    _add_common(p, trials=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--C", type=float, required=True)

    p = sub.add_parser("threshold", help="estimate the 50%% crossing from a sweep CSV")
    p.add_argument("--in", dest="inputs", action="append", required=True)

    p = sub.add_parser("plot", help="render success-rate curves from sweep CSVs to SVG")
    p.add_argument("--in", dest="inputs", action="append", required=True)
    p.add_argument("--out", required=True, help="output SVG path")

    return parser


def _cmd_sweep(args) -> int:
    cfg = SweepConfig(
        n=args.n,
        m=args.m,
        k_grid=tuple(range(args.k_min, args.k_max + 1, args.k_step)),
        trials=args.trials,
        algorithm=args.alg.replace("-", "_"),
        model=model_from_name(args.dist),
        master_seed=args.seed,
        omega=args.omega,
        matrix_mode=args.matrix_mode,
    )
    result = run_sweep(cfg, threads=args.threads, log=lambda s: print(s, file=sys.stderr))
    write_sweep_csv(result, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_solve(args) -> int:
    base = SeedSpec(args.seed)
    A = gen_gaussian_matrix(args.m, args.n, derive_stream(base.child(0)))
    signal = gen_sparse_signal(args.n, args.k, model_from_name(args.dist),
                               derive_stream(base.child(2)))
    x_true = signal.densify()
    if args.alg == "plain":
        rep = basis_pursuit(A, A @ x_true)
        err = squared_error(x_true, rep.solution)
        converged = rep.converged
    else:
        W = gen_weight_diagonal(args.n, derive_stream(base.child(1)))
        y = apply_column_weights(A, W) @ x_true
        outcome = recover_two_stage(A, W, y, RecoveryConfig(k=args.k, omega=args.omega))
        err = squared_error(x_true, outcome.x_star)
        converged = outcome.converged
    print(f"squared_error={err:.6g} converged={converged}")
    return 0


def _cmd_support_recovery(args) -> int:
    grid = [float(v) for v in args.eps_grid.split(",") if v.strip()]
    result = run_support_recovery_experiment(
        args.n, args.m, grid, model_from_name(args.dist), args.trials, args.seed, k0=args.k0
    )
    print(f"k0={result.k0:.6g}")
    print("epsilon0,k,mean_overlap")
    for row in result.rows:
        print(f"{row.epsilon0:.6g},{row.k},{row.mean_overlap:.6g}")
    return 0


def _cmd_weighted_threshold(args) -> int:
    rate = run_weighted_threshold_experiment(
        args.n, args.m, args.gamma1, args.f1, args.f2, args.omega, args.trials, args.seed
    )
    print(f"success_rate={rate:.6g}")
    return 0


def _cmd_check_stability(args) -> int:
    from nonisocs.signals import GaussianAmplitude  # tail model of the check

    threshold = args.threshold
    if threshold is None:
        threshold = estimate_plain_threshold(args.n, args.m, GaussianAmplitude(1.0), args.seed)
    C = scaling_law_C(args.varpi)
    size_K = int((1.0 - args.varpi) * threshold * args.n)
    base = SeedSpec(args.seed)
    held = 0
    for t in range(args.trials):
        A = gen_gaussian_matrix(args.m, args.n, derive_stream(base.child(1, t, 0)))
        gen = derive_stream(base.child(1, t, 2))
        K = np.sort(gen.choice(args.n, size=size_K, replace=False))
        x = 0.1 * gen.standard_normal(args.n)  # small dense tail
        x[K] = gen.standard_normal(size_K)
        rep = basis_pursuit(A, A @ x)
        if verify_stability_bounds(x, rep.solution, K, C).holds:
            held += 1
    print(f"C={C:.6g} |K|={size_K} holds={held}/{args.trials}")
    return 0


def _cmd_check_nullspace(args) -> int:
    base = SeedSpec(args.seed)
    A = gen_gaussian_matrix(args.m, args.n, derive_stream(base.child(0)))
    gen = derive_stream(base.child(2))
    K = np.sort(gen.choice(args.n, size=args.k, replace=False))
    x = np.zeros(args.n)
    x[K] = gen.standard_normal(args.k)
    holds, min_value = check_null_space_condition(A, x, K, args.C)
    print(f"holds={holds} min_value={min_value:.6g} xK_l1={np.sum(np.abs(x[K])):.6g}")
    return 0


def _cmd_threshold(args) -> int:
    for path in args.inputs:
        rows = read_sweep_csv(path)
        by_alg: dict[str, list[dict]] = {}
        for row in rows:
            by_alg.setdefault(row["algorithm"], []).append(row)
        for alg, alg_rows in by_alg.items():
            thr = estimate_threshold_from_curve(
                [r["k_over_n"] for r in alg_rows], [r["success_rate"] for r in alg_rows]
            )
            print(f"{path}:{alg} threshold k/n = {thr:.6g}")
    return 0


def _cmd_plot(args) -> int:
    curves = []
    for path in args.inputs:
        by_alg: dict[str, list[tuple[float, float]]] = {}
        for row in read_sweep_csv(path):
            by_alg.setdefault(row["algorithm"], []).append(
                (row["k_over_n"], row["success_rate"])
            )
        for alg, pts in by_alg.items():
            curves.append((f"{path} {alg}", pts))
    write_success_curves_svg(curves, args.out)
    print(f"wrote {args.out}")
    return 0


_HANDLERS = {
    "sweep": _cmd_sweep,
    "solve": _cmd_solve,
    "support-recovery": _cmd_support_recovery,
    "weighted-threshold": _cmd_weighted_threshold,
    "check-stability": _cmd_check_stability,
    "check-nullspace": _cmd_check_nullspace,
    "threshold": _cmd_threshold,
    "plot": _cmd_plot,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _HANDLERS[args.subcommand](args)
    except (ValueError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
