"""Sensing operators: i.i.d. Gaussian matrices and column-weighted products.

A sensing matrix is a plain (m, n) float64 ndarray; a weight diagonal is a
length-n float64 ndarray with no entry smaller than W_MIN in magnitude.
Matrices are regenerated from seeds rather than serialized: the seed is the
canonical matrix format.
"""

from __future__ import annotations

import numpy as np

# Redraw floor for the weight diagonal. Only nonzero entries are required,
# but a floor keeps the inverse weighting in the final unscaling step from
# amplifying numerical noise; N(0,1) mass below it is ~8e-7.
W_MIN = 1e-6


def gen_gaussian_matrix(m: int, n: int, stream: np.random.Generator) -> np.ndarray:
    """(m, n) matrix with i.i.d. N(0,1) entries, deterministic given stream."""
    if m < 1 or n < 1:
        raise ValueError(f"matrix dimensions must be positive: ({m}, {n})")
    return stream.standard_normal((m, n))


def gen_weight_diagonal(n: int, stream: np.random.Generator, w_min: float = W_MIN) -> np.ndarray:
    """n standard-normal weights, redrawn until every |w_i| >= w_min."""
    if n < 1:
        raise ValueError(f"n must be positive: {n}")
    w = stream.standard_normal(n)
    small = np.abs(w) < w_min
    while np.any(small):
        w[small] = stream.standard_normal(int(small.sum()))
        small = np.abs(w) < w_min
    return w


def _check_weights(A_cols: int, weights: np.ndarray) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or weights.shape[0] != A_cols:
        raise ValueError(f"weight length {weights.shape} does not match {A_cols} columns")
    return weights


def apply_column_weights(A: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Column-weighted product: column j of the result is w_j * A[:, j]."""
    A = np.asarray(A, dtype=float)
    weights = _check_weights(A.shape[1], weights)
    return A * weights[np.newaxis, :]


def apply_forward_weights(x: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Elementwise product w_i * x_i (the weighting the diagonal applies)."""
    x = np.asarray(x, dtype=float)
    weights = _check_weights(x.shape[0], weights)
    return x * weights


def apply_inverse_weights(x: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Elementwise quotient x_i / w_i (the final unscaling of recovery)."""
    x = np.asarray(x, dtype=float)
    weights = _check_weights(x.shape[0], weights)
    return x / weights
