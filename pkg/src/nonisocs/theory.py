"""Executable checks of the stability and null-space machinery.

No closed-form support-recovery prediction is computed here; the harness
measures the empirical support overlap instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nonisocs.solver import SolverConfig, min_over_nullspace

_STABILITY_TOL = 1e-9
_NULLSPACE_TOL = 1e-7


def scaling_law_C(varpi: float) -> float:
    """Stability constant C = 1 / sqrt(1 - varpi) for varpi in [0, 1)."""
    if not (0.0 <= varpi < 1.0):
        raise ValueError(f"varpi must be in [0, 1): {varpi}")
    return 1.0 / np.sqrt(1.0 - varpi)


@dataclass
class StabilityCheck:
    C: float
    lhs_support: float  # |x_K|_1 - |xhat_K|_1
    bound_support: float  # 2/(C-1) * |x_Kbar|_1
    lhs_tail: float  # |(x - xhat)_Kbar|_1
    bound_tail: float  # 2C/(C-1) * |x_Kbar|_1
    holds: bool


def verify_stability_bounds(
    x: np.ndarray, x_hat: np.ndarray, K: np.ndarray, C: float
) -> StabilityCheck:
    """Evaluate both stability inequalities for a given solution x_hat."""
    if C <= 1.0:
        raise ValueError(f"C must be > 1: {C}")
    x = np.asarray(x, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    if x.shape != x_hat.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {x_hat.shape}")
    n = x.shape[0]
    K = np.asarray(K, dtype=np.intp).ravel()
    mask = np.zeros(n, dtype=bool)
    mask[K] = True

    tail_norm = float(np.sum(np.abs(x[~mask])))
    lhs_support = float(np.sum(np.abs(x[mask])) - np.sum(np.abs(x_hat[mask])))
    bound_support = 2.0 / (C - 1.0) * tail_norm
    lhs_tail = float(np.sum(np.abs((x - x_hat)[~mask])))
    bound_tail = 2.0 * C / (C - 1.0) * tail_norm

    tol = _STABILITY_TOL * (1.0 + float(np.sum(np.abs(x))))
    holds = lhs_support <= bound_support + tol and lhs_tail <= bound_tail + tol
    return StabilityCheck(
        C=C,
        lhs_support=lhs_support,
        bound_support=bound_support,
        lhs_tail=lhs_tail,
        bound_tail=bound_tail,
        holds=holds,
    )


def check_null_space_condition(
    A: np.ndarray,
    x: np.ndarray,
    K: np.ndarray,
    C: float,
    cfg: SolverConfig | None = None,
) -> tuple[bool, float]:
    """Does |x_K + w_K|_1 + |w_Kbar|_1 / C >= |x_K|_1 hold over null(A)?

    Since w = 0 is feasible, the condition holds exactly when the minimum
    equals |x_K|_1 (within tolerance).
    """
    if C <= 1.0:
        raise ValueError(f"C must be > 1: {C}")
    x = np.asarray(x, dtype=float)
    K = np.asarray(K, dtype=np.intp).ravel()
    xK = x[K]
    min_value = min_over_nullspace(A, xK, K, C, cfg)
    xK_norm = float(np.sum(np.abs(xK)))
    assert min_value <= xK_norm + 1e-12 * (1.0 + xK_norm)
    holds = min_value >= xK_norm - _NULLSPACE_TOL * (1.0 + xK_norm)
    return holds, min_value
