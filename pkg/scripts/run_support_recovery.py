#!/usr/bin/env python3
"""Measure the approximate support-recovery trend of the stage-1 estimate.

For each epsilon0 in the grid, the sparsity is k = (1 + epsilon0) * k0 with
k0 the empirical plain-l1 threshold at (n, m); the script reports the mean
overlap between the true support and the k largest-magnitude coordinates of
the l1 solution.

    python scripts/run_support_recovery.py --n 512 --m 256 --dist gauss \
        --eps-grid 0.05,0.1,0.2,0.3 --trials 50 --seed 9
"""

import argparse
import sys

from nonisocs.harness import model_from_name, run_support_recovery_experiment


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=512)
    parser.add_argument("--m", type=int, default=256)
    parser.add_argument("--dist", choices=["rademacher", "gauss"], default="gauss")
    parser.add_argument("--eps-grid", default="0.05,0.1,0.2,0.3")
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--k0", type=float, default=None,
                        help="skip the threshold estimate and use this k0 directly")
    args = parser.parse_args(argv)

    grid = [float(v) for v in args.eps_grid.split(",") if v.strip()]
    result = run_support_recovery_experiment(
        args.n, args.m, grid, model_from_name(args.dist), args.trials, args.seed, k0=args.k0
    )
    print(f"k0 = {result.k0:.2f} ({result.k0 / args.n:.4f} n)")
    print("epsilon0  k     mean_overlap")
    for row in result.rows:
        print(f"{row.epsilon0:8.3f}  {row.k:4d}  {row.mean_overlap:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
