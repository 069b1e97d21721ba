"""Random k-sparse test signals and support statistics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class ConstantModulus:
    """Nonzeros are +d or -d with equal probability (Rademacher signs)."""

    d: float = 1.0

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("constant modulus d must be nonzero")


@dataclass(frozen=True)
class GaussianAmplitude:
    """Nonzeros are i.i.d. N(0, sigma^2)."""

    sigma: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive: {self.sigma}")


AmplitudeModel = Union[ConstantModulus, GaussianAmplitude]


@dataclass(frozen=True)
class SparseSignal:
    """Exactly-sparse signal: sorted support indices plus nonzero values."""

    n: int
    support: np.ndarray  # sorted distinct ints in [0, n)
    values: np.ndarray  # nonzero floats, aligned with support
    model: AmplitudeModel

    def __post_init__(self):
        if self.support.shape != self.values.shape:
            raise ValueError("support and values must have equal length")
        if np.any(self.values == 0):
            raise ValueError("sparse signal values must all be nonzero")

    @property
    def k(self) -> int:
        return int(self.support.shape[0])

    def densify(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[self.support] = self.values
        return x


def gen_sparse_signal(
    n: int, k: int, model: AmplitudeModel, stream: np.random.Generator
) -> SparseSignal:
    """Uniform random k-subset support with i.i.d. nonzeros from `model`."""
    if n < 1:
        raise ValueError(f"n must be positive: {n}")
    if not (0 <= k <= n):
        raise ValueError(f"k must be in [0, n]: k={k}, n={n}")
    support = np.sort(stream.choice(n, size=k, replace=False))
    if isinstance(model, ConstantModulus):
        values = model.d * (2.0 * stream.integers(0, 2, size=k) - 1.0)
    else:
        values = model.sigma * stream.standard_normal(k)
        # exact zeros occur with probability 0 in theory, but guard anyway
        zero = values == 0
        while np.any(zero):
            values[zero] = model.sigma * stream.standard_normal(int(zero.sum()))
            zero = values == 0
    return SparseSignal(n=n, support=support.astype(np.intp), values=values, model=model)


def supp_k(x: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k largest-magnitude entries, ties to the lowest index.

    Returned sorted ascending.
    """
    x = np.asarray(x, dtype=float)
    if not (0 <= k <= x.shape[0]):
        raise ValueError(f"k must be in [0, len(x)]: k={k}, len={x.shape[0]}")
    # stable sort on negated magnitude keeps the lowest index first among ties
    order = np.argsort(-np.abs(x), kind="stable")
    return np.sort(order[:k]).astype(np.intp)


def support_overlap(K, L) -> float:
    """|K ∩ L| / |K|."""
    K = set(int(i) for i in np.asarray(K).ravel())
    L = set(int(i) for i in np.asarray(L).ravel())
    if not K:
        raise ValueError("reference support K must be nonempty")
    return len(K & L) / len(K)


def squared_error(x: np.ndarray, y: np.ndarray) -> float:
    """Sum of squared differences (the success statistic of the harness)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    d = x - y
    return float(d @ d)
