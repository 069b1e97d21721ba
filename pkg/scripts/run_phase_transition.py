#!/usr/bin/env python3
"""Reproduce the phase-transition curves: plain l1 vs the two-stage scheme.

Runs both algorithms over the same sparsity grid, writes one CSV per
algorithm plus an overlaid SVG, and prints the estimated 50% thresholds.

Full-scale run (slow on a laptop):
    python scripts/run_phase_transition.py --n 1000 --m 500 --trials 100 \
        --dist rademacher --k-min 100 --k-max 260 --k-step 10 --seed 7 --out-dir results
Reduced tier:
    python scripts/run_phase_transition.py --n 256 --m 128 --trials 50 \
        --dist rademacher --k-min 28 --k-max 68 --k-step 4 --seed 7 --out-dir results
"""

import argparse
import os
import sys

from nonisocs.harness import (
    SweepConfig,
    ThresholdNotFoundError,
    estimate_threshold,
    model_from_name,
    run_sweep,
    write_sweep_csv,
)
from nonisocs.svgplot import write_success_curves_svg


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--m", type=int, default=500)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--dist", choices=["rademacher", "gauss"], default="rademacher")
    parser.add_argument("--omega", type=float, default=3.0)
    parser.add_argument("--k-min", type=int, default=100)
    parser.add_argument("--k-max", type=int, default=260)
    parser.add_argument("--k-step", type=int, default=10)
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--out-dir", default="results")
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    os.makedirs(args.out_dir, exist_ok=True)
    grid = tuple(range(args.k_min, args.k_max + 1, args.k_step))
    curves = []
    for alg in ("plain", "two_stage"):
        cfg = SweepConfig(
            n=args.n,
            m=args.m,
            k_grid=grid,
            trials=args.trials,
            algorithm=alg,
            model=model_from_name(args.dist),
            master_seed=args.seed,
            omega=args.omega,
        )
        print(f"running {alg} sweep ({len(grid)} grid points x {args.trials} trials)...")
        result = run_sweep(cfg, threads=args.threads, log=lambda s: print("  " + s))
        csv_path = os.path.join(args.out_dir, f"{args.dist}_{alg}_n{args.n}.csv")
        write_sweep_csv(result, csv_path)
        print(f"wrote {csv_path}")
        try:
            print(f"{alg} threshold k/n = {estimate_threshold(result):.4f}")
        except ThresholdNotFoundError:
            print(f"{alg}: no 50% crossing inside the grid")
        curves.append(
            (alg, [(row.k / args.n, row.success_rate) for row in result.rows])
        )
    svg_path = os.path.join(args.out_dir, f"{args.dist}_curves_n{args.n}.svg")
    write_success_curves_svg(curves, svg_path)
    print(f"wrote {svg_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
