"""Monte-Carlo phase-transition experiments and result serialization.

Every trial owns streams derived from (master_seed, [k, trial_index, kind]),
so sweep output is a pure function of configuration and invariant to how
trials are distributed across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from nonisocs.pipeline import RecoveryConfig, recover_two_stage
from nonisocs.sampling import SeedSpec, derive_stream
from nonisocs.sensing import apply_column_weights, gen_gaussian_matrix, gen_weight_diagonal
from nonisocs.signals import (
    AmplitudeModel,
    ConstantModulus,
    GaussianAmplitude,
    gen_sparse_signal,
    squared_error,
    supp_k,
    support_overlap,
)
from nonisocs.solver import SolverConfig, basis_pursuit, weighted_basis_pursuit

SUCCESS_SQ_ERR = 1e-6  # declared-success ceiling on |x_true - x*|^2

# stream kinds within one trial
_KIND_MATRIX = 0
_KIND_WEIGHTS = 1
_KIND_SIGNAL = 2
_KIND_PLANT = 3

# label offset for experiments that share a master seed with an internal sweep
_EXPERIMENT_LABEL_BASE = 1_000_000

CSV_HEADER = "n,m,k,k_over_n,algorithm,dist,omega,trials,successes,success_rate,mean_overlap,master_seed"


def default_experiment_solver() -> SolverConfig:
    """Solver settings used by the Monte-Carlo experiments.

    Looser iteration tolerances than the SolverConfig defaults: polishing
    restores machine precision on recoverable instances, and failed
    instances only need enough accuracy to rank magnitudes for the
    stage-2 support estimate.
    """
    return SolverConfig(tol_abs=1e-6, tol_rel=1e-6, max_iters=6000)


class ThresholdNotFoundError(LookupError):
    """Raised when a success curve never crosses 50% downward."""


@dataclass(frozen=True)
class SweepConfig:
    n: int
    m: int
    k_grid: tuple[int, ...]
    trials: int
    algorithm: str  # "plain" | "two_stage"
    model: AmplitudeModel
    master_seed: int
    omega: float = 3.0
    matrix_mode: str = "fresh_per_trial"  # | "fixed_per_k"
    solver: SolverConfig = field(default_factory=default_experiment_solver)

    def __post_init__(self):
        if not (0 < self.m < self.n):
            raise ValueError(f"need 0 < m < n: m={self.m}, n={self.n}")
        object.__setattr__(self, "k_grid", tuple(int(k) for k in self.k_grid))
        if any(not (1 <= k <= self.n) for k in self.k_grid):
            raise ValueError("k_grid entries must lie in [1, n]")
        if list(self.k_grid) != sorted(self.k_grid):
            raise ValueError("k_grid must be ascending")
        if self.trials < 1:
            raise ValueError(f"trials must be positive: {self.trials}")
        if self.algorithm not in ("plain", "two_stage"):
            raise ValueError(f"unknown algorithm: {self.algorithm}")
        if self.matrix_mode not in ("fresh_per_trial", "fixed_per_k"):
            raise ValueError(f"unknown matrix_mode: {self.matrix_mode}")


@dataclass(frozen=True)
class TrialResult:
    success: bool
    sq_err: float
    overlap: float


@dataclass
class SweepRow:
    k: int
    trials: int
    successes: int
    success_rate: float
    mean_overlap: float
    mean_failure_sq_err: float  # nan when every trial succeeded


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[SweepRow]


def dist_name(model: AmplitudeModel) -> str:
    if isinstance(model, ConstantModulus):
        return "rademacher"
    if isinstance(model, GaussianAmplitude):
        return "gauss"
    raise ValueError(f"unknown amplitude model: {model!r}")


def model_from_name(name: str) -> AmplitudeModel:
    if name == "rademacher":
        return ConstantModulus(1.0)
    if name == "gauss":
        return GaussianAmplitude(1.0)
    raise ValueError(f"unknown distribution name: {name}")


def _matrix_streams(cfg: SweepConfig, k: int, trial_index: int):
    base = SeedSpec(cfg.master_seed)
    if cfg.matrix_mode == "fixed_per_k":
        return base.child(k, _KIND_MATRIX), base.child(k, _KIND_WEIGHTS)
    return base.child(k, trial_index, _KIND_MATRIX), base.child(k, trial_index, _KIND_WEIGHTS)


def run_trial(cfg: SweepConfig, k: int, trial_index: int) -> TrialResult:
    """One recovery trial; solver non-convergence counts as failure."""
    if k not in cfg.k_grid:
        raise ValueError(f"k={k} is not in the configured grid")
    mat_spec, wt_spec = _matrix_streams(cfg, k, trial_index)
    sig_spec = SeedSpec(cfg.master_seed).child(k, trial_index, _KIND_SIGNAL)

    A = gen_gaussian_matrix(cfg.m, cfg.n, derive_stream(mat_spec))
    signal = gen_sparse_signal(cfg.n, k, cfg.model, derive_stream(sig_spec))
    x_true = signal.densify()

    if cfg.algorithm == "plain":
        y = A @ x_true
        rep = basis_pursuit(A, y, cfg.solver)
        x_est = rep.solution
        sq_err = squared_error(x_true, x_est)
        success = rep.converged and sq_err <= SUCCESS_SQ_ERR
        overlap = support_overlap(signal.support, supp_k(x_est, k))
    else:
        W = gen_weight_diagonal(cfg.n, derive_stream(wt_spec))
        y = apply_column_weights(A, W) @ x_true
        outcome = recover_two_stage(
            A,
            W,
            y,
            RecoveryConfig(k=k, omega=cfg.omega, solver=cfg.solver),
            true_support=signal.support,
        )
        sq_err = squared_error(x_true, outcome.x_star)
        success = outcome.converged and sq_err <= SUCCESS_SQ_ERR
        overlap = outcome.overlap if outcome.overlap is not None else 0.0
    return TrialResult(success=bool(success), sq_err=float(sq_err), overlap=float(overlap))


def _trial_task(args) -> tuple[int, int, TrialResult]:
    cfg, k, trial_index = args
    return k, trial_index, run_trial(cfg, k, trial_index)


def _aggregate(cfg: SweepConfig, results: dict[tuple[int, int], TrialResult]) -> SweepResult:
    rows = []
    for k in cfg.k_grid:
        trials = [results[(k, t)] for t in range(cfg.trials)]
        successes = sum(1 for t in trials if t.success)
        failures = [t.sq_err for t in trials if not t.success]
        rows.append(
            SweepRow(
                k=k,
                trials=cfg.trials,
                successes=successes,
                success_rate=successes / cfg.trials,
                mean_overlap=float(np.mean([t.overlap for t in trials])),
                mean_failure_sq_err=float(np.mean(failures)) if failures else float("nan"),
            )
        )
    return SweepResult(config=cfg, rows=rows)


def run_sweep(
    cfg: SweepConfig,
    threads: int = 1,
    log: Callable[[str], None] | None = None,
) -> SweepResult:
    """Aggregate run_trial over the grid; invariant to worker count."""
    work = [(cfg, k, t) for k in cfg.k_grid for t in range(cfg.trials)]
    results: dict[tuple[int, int], TrialResult] = {}
    if threads <= 1:
        for item in work:
            k, t, res = _trial_task(item)
            results[(k, t)] = res
            if log is not None and t == cfg.trials - 1:
                done = sum(1 for (kk, _) in results if kk == k)
                if done == cfg.trials:
                    rate = sum(results[(k, i)].success for i in range(cfg.trials)) / cfg.trials
                    log(f"k={k} k/n={k / cfg.n:.4f} success_rate={rate:.3f}")
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for k, t, res in pool.map(_trial_task, work, chunksize=8):
                results[(k, t)] = res
        if log is not None:
            for k in cfg.k_grid:
                rate = sum(results[(k, i)].success for i in range(cfg.trials)) / cfg.trials
                log(f"k={k} k/n={k / cfg.n:.4f} success_rate={rate:.3f}")
    return _aggregate(cfg, results)


def estimate_threshold_from_curve(k_over_n: Sequence[float], rates: Sequence[float]) -> float:
    """k/n at the first downward 0.5 crossing, by linear interpolation."""
    pts = sorted(zip(k_over_n, rates))
    for (x0, r0), (x1, r1) in zip(pts, pts[1:]):
        if r0 >= 0.5 > r1:
            if r0 == 0.5:
                return float(x0)
            return float(x0 + (r0 - 0.5) / (r0 - r1) * (x1 - x0))
    raise ThresholdNotFoundError("success curve has no downward 0.5 crossing")


def estimate_threshold(result: SweepResult) -> float:
    n = result.config.n
    return estimate_threshold_from_curve(
        [row.k / n for row in result.rows], [row.success_rate for row in result.rows]
    )


def check_monotonicity(result: SweepResult) -> list[int]:
    """k values where the success rate rises by more than 3 binomial sigma.

    Rates should fall with k up to sampling noise; a larger rise indicates a
    harness bug. Returns the offending k values (empty list when clean).
    """
    bad = []
    for prev, row in zip(result.rows, result.rows[1:]):
        p = prev.success_rate
        sigma = math.sqrt(max(p * (1.0 - p), 1.0 / prev.trials) / prev.trials)
        if row.success_rate > p + 3.0 * sigma:
            bad.append(row.k)
    return bad


# ---------------------------------------------------------------------------
# CSV / serialization


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def sweep_csv_lines(results: Iterable[SweepResult]) -> list[str]:
    lines = [CSV_HEADER]
    for result in results:
        cfg = result.config
        dist = dist_name(cfg.model)
        for row in result.rows:
            lines.append(
                ",".join(
                    [
                        str(cfg.n),
                        str(cfg.m),
                        str(row.k),
                        _fmt(row.k / cfg.n),
                        cfg.algorithm,
                        dist,
                        _fmt(cfg.omega),
                        str(row.trials),
                        str(row.successes),
                        _fmt(row.success_rate),
                        _fmt(row.mean_overlap),
                        str(cfg.master_seed),
                    ]
                )
            )
    return lines


def write_sweep_csv(results: Iterable[SweepResult] | SweepResult, path: str) -> None:
    if isinstance(results, SweepResult):
        results = [results]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(sweep_csv_lines(results)) + "\n")


def read_sweep_csv(path: str) -> list[dict]:
    """Rows of a sweep CSV as dicts with numeric fields parsed."""
    with open(path) as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: missing or unexpected CSV header")
    names = CSV_HEADER.split(",")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(names):
            raise ValueError(f"{path}: malformed row: {line}")
        row = dict(zip(names, parts))
        for key in ("n", "m", "k", "trials", "successes", "master_seed"):
            row[key] = int(row[key])
        for key in ("k_over_n", "omega", "success_rate", "mean_overlap"):
            row[key] = float(row[key])
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Support-recovery experiment


@dataclass
class SupportRecoveryRow:
    epsilon0: float
    k: int
    mean_overlap: float


@dataclass
class SupportRecoveryResult:
    n: int
    m: int
    k0: float  # empirical plain-l1 threshold, in index counts
    rows: list[SupportRecoveryRow]


def _default_threshold_grid(n: int) -> tuple[int, ...]:
    step = max(1, round(0.01 * n))
    return tuple(range(round(0.10 * n), round(0.25 * n) + 1, step))


def estimate_plain_threshold(
    n: int,
    m: int,
    model: AmplitudeModel,
    master_seed: int,
    trials: int = 40,
    k_grid: tuple[int, ...] | None = None,
    threads: int = 1,
) -> float:
    """Empirical 50%-crossing of plain l1 at (n, m), in k/n units."""
    cfg = SweepConfig(
        n=n,
        m=m,
        k_grid=k_grid or _default_threshold_grid(n),
        trials=trials,
        algorithm="plain",
        model=model,
        master_seed=master_seed,
    )
    return estimate_threshold(run_sweep(cfg, threads=threads))


def run_support_recovery_experiment(
    n: int,
    m: int,
    epsilon0_grid: Sequence[float],
    model: AmplitudeModel,
    trials: int,
    master_seed: int,
    k0: float | None = None,
    solver: SolverConfig | None = None,
) -> SupportRecoveryResult:
    """Mean overlap between supp(x) and the k-support of the l1 estimate.

    Sparsity per grid point is k = round((1 + eps0) * k0) where k0 is the
    empirical plain threshold for (n, m), estimated here unless supplied.
    Negative eps0 values are allowed as below-threshold control rows.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive: {trials}")
    solver = solver or default_experiment_solver()
    if k0 is None:
        k0 = estimate_plain_threshold(n, m, model, master_seed) * n
    rows = []
    for idx, eps0 in enumerate(epsilon0_grid):
        k = round((1.0 + eps0) * k0)
        if not (1 <= k <= n):
            raise ValueError(f"eps0={eps0} gives k={k} outside [1, {n}]")
        overlaps = []
        for t in range(trials):
            base = SeedSpec(master_seed)
            A = gen_gaussian_matrix(
                m, n, derive_stream(base.child(_EXPERIMENT_LABEL_BASE + idx, t, _KIND_MATRIX))
            )
            signal = gen_sparse_signal(
                n, k, model, derive_stream(base.child(_EXPERIMENT_LABEL_BASE + idx, t, _KIND_SIGNAL))
            )
            x = signal.densify()
            rep = basis_pursuit(A, A @ x, solver)
            overlaps.append(support_overlap(signal.support, supp_k(rep.solution, k)))
        rows.append(SupportRecoveryRow(epsilon0=float(eps0), k=k, mean_overlap=float(np.mean(overlaps))))
    return SupportRecoveryResult(n=n, m=m, k0=float(k0), rows=rows)


# ---------------------------------------------------------------------------
# Planted-support weighted-l1 experiment


def run_weighted_threshold_experiment(
    n: int,
    m: int,
    gamma1: float,
    f1: float,
    f2: float,
    omega: float,
    trials: int,
    master_seed: int,
    solver: SolverConfig | None = None,
) -> float:
    """Success rate of weighted l1 with a planted support split.

    Plants a random set L of size gamma1*n, a +-1 signal with exactly
    ceil(f1*|L|) nonzeros on L and floor(f2*(n-|L|)) off it, and solves with
    weight 1 on L and omega elsewhere.
    """
    if not (0.0 < gamma1 < 1.0):
        raise ValueError(f"gamma1 must be in (0, 1): {gamma1}")
    if not (0.0 <= f1 <= 1.0 and 0.0 <= f2 <= 1.0):
        raise ValueError("f1 and f2 must be in [0, 1]")
    if trials < 1:
        raise ValueError(f"trials must be positive: {trials}")
    n_L = round(gamma1 * n)
    k_on = math.ceil(f1 * n_L)
    k_off = math.floor(f2 * (n - n_L))
    if k_on > n_L or k_off > n - n_L or k_on + k_off > n:
        raise ValueError(f"infeasible fractions: f1={f1}, f2={f2}, gamma1={gamma1}")
    solver = solver or default_experiment_solver()

    successes = 0
    base = SeedSpec(master_seed)
    for t in range(trials):
        A = gen_gaussian_matrix(m, n, derive_stream(base.child(0, t, _KIND_MATRIX)))
        plant = derive_stream(base.child(0, t, _KIND_PLANT))
        perm = plant.permutation(n)
        L = perm[:n_L]
        sign_stream = derive_stream(base.child(0, t, _KIND_SIGNAL))
        x = np.zeros(n)
        on_idx = plant.choice(n_L, size=k_on, replace=False)
        off_idx = plant.choice(n - n_L, size=k_off, replace=False)
        support = np.concatenate([L[on_idx], perm[n_L:][off_idx]])
        x[support] = 2.0 * sign_stream.integers(0, 2, size=support.size) - 1.0

        weights = np.full(n, omega)
        weights[L] = 1.0
        rep = weighted_basis_pursuit(A, A @ x, weights, solver)
        if rep.converged and squared_error(x, rep.solution) <= SUCCESS_SQ_ERR:
            successes += 1
    return successes / trials
