"""Deterministic hierarchical pseudo-random sampling.

Every random object in the library (matrix, weight diagonal, signal) is drawn
from a child stream derived from a master seed and an integer path, so a whole
experiment is a pure function of its master seed no matter how trials are
scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MAX_MASTER = 2**64
_MAX_LABEL = 2**32


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus a path of 32-bit labels identifying one stream."""

    master_seed: int
    path: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not (0 <= int(self.master_seed) < _MAX_MASTER):
            raise ValueError(f"master_seed must be in [0, 2^64): {self.master_seed}")
        object.__setattr__(self, "path", tuple(int(p) for p in self.path))
        for label in self.path:
            if not (0 <= label < _MAX_LABEL):
                raise ValueError(f"path labels must be in [0, 2^32): {label}")

    def child(self, *labels: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.path + tuple(labels))


def derive_stream(spec: SeedSpec) -> np.random.Generator:
    """Derive the child stream for `spec`.

    Pure function: the same (master_seed, path) always yields a generator
    producing the identical word sequence; distinct paths yield distinct
    streams. Philox is counter-based, so derivation is cheap and collision
    behaviour is governed by SeedSequence's hashing.
    """
    ss = np.random.SeedSequence(spec.master_seed, spawn_key=spec.path)
    return np.random.Generator(np.random.Philox(ss))


def sample_gaussian(stream: np.random.Generator, count: int) -> np.ndarray:
    """Draw `count` i.i.d. N(0,1) variates, consuming stream state."""
    if count < 1:
        raise ValueError(f"count must be >= 1: {count}")
    return stream.standard_normal(count)
