"""Random regular multigraphs from the configuration model.

Randomness comes from numpy's PCG64.  Draw ``k`` of master seed ``s`` uses
the substream seeded by ``SeedSequence([s, k])``, so results are identical
across machines and independent of how many draws came before.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParityError, SamplingFailureError, UnsupportedDegreeError
from .graph import Graph

MODES = ("configuration", "uniform-simple")
_MODE_ALIASES = {"config": "configuration", "simple": "uniform-simple"}


def substream(seed: int, k: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(k)])))


@dataclass(frozen=True)
class SamplerConfig:
    n: int
    d: int
    seed: int = 0
    mode: str = "configuration"

    def __post_init__(self):
        object.__setattr__(self, "mode", _MODE_ALIASES.get(self.mode, self.mode))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if (self.n * self.d) % 2:
            raise ParityError(f"n*d must be even (n={self.n}, d={self.d})")
        if self.d < 3:
            raise UnsupportedDegreeError(f"samplers require d >= 3, got d={self.d}")
        if self.n <= self.d:
            raise ValueError(f"need n > d (n={self.n}, d={self.d})")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def configuration_edges(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform perfect matching on the ``n*d`` half-edges, as an edge array.

    Half-edge ``v*d + i`` belongs to vertex ``v``; a Fisher-Yates shuffle of
    the half-edge sequence is paired off consecutively.  No degree checks,
    so this also serves d < 3.
    """
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    rng.shuffle(stubs)
    return stubs.reshape(-1, 2)


def sample_configuration(cfg: SamplerConfig) -> Graph:
    """d-regular multigraph (loops and parallel edges allowed) from ``cfg.seed``."""
    return Graph(cfg.n, configuration_edges(cfg.n, cfg.d, substream(cfg.seed, 0)))


def default_retry_budget(d: int) -> int:
    return 10 * math.ceil(math.exp(d * d / 4))


def sample_uniform_simple(cfg: SamplerConfig, max_attempts: int | None = None) -> Graph:
    """Uniform simple d-regular graph by rejection from the configuration model.

    Attempt ``k`` uses substream ``k``; attempt 0 coincides with
    :func:`sample_configuration` on the same seed.
    """
    budget = default_retry_budget(cfg.d) if max_attempts is None else max_attempts
    for k in range(budget):
        g = Graph(cfg.n, configuration_edges(cfg.n, cfg.d, substream(cfg.seed, k)))
        if g.is_simple():
            return g
    raise SamplingFailureError(
        f"no simple graph after {budget} attempts (n={cfg.n}, d={cfg.d}, seed={cfg.seed})",
        attempts=budget,
    )


def sample(cfg: SamplerConfig) -> Graph:
    if cfg.mode == "configuration":
        return sample_configuration(cfg)
    return sample_uniform_simple(cfg)


def sample_graph(n: int, d: int, seed: int = 0, mode: str = "uniform-simple") -> Graph:
    return sample(SamplerConfig(n, d, seed, mode))
