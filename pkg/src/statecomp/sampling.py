"""Seeded, order-independent randomness and Monte Carlo summaries."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np


class RandomStream:
    """Deterministic randomness handle.

    A stream is identified by a root seed plus a path of integers.
    ``substream(i)`` derives a statistically independent child stream whose
    output depends only on ``(seed, path)``, never on creation order, so
    per-sample fan-out gives identical numbers whether the samples are
    evaluated serially, in a different order, or in parallel.
    """

    __slots__ = ("seed", "path")

    def __init__(self, seed: int, path: tuple = ()):
        self.seed = int(seed)
        self.path = tuple(int(p) for p in path)

    def substream(self, *indices: int) -> "RandomStream":
        return RandomStream(self.seed, self.path + indices)

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=self.path))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, path={self.path})"


class MonteCarloEstimate(NamedTuple):
    estimate: float
    std_error: float


def summarize(values) -> MonteCarloEstimate:
    """Sample mean and its standard error (zero for a single sample)."""
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        return MonteCarloEstimate(float(arr.mean()), 0.0)
    return MonteCarloEstimate(float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size)))
