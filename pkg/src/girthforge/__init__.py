"""Random regular graphs, short-cycle removal, and near-Ramanujan 2-lift constructions."""

__version__ = "0.1.0"

from .cycles import (  # noqa: E402
    Cycle,
    analyze,
    bicycle_free_radius,
    enumerate_short_cycles,
    girth,
    is_bicycle_free,
)
from .errors import *  # noqa: E402,F401,F403
from .fixer import FixParams, FixPlan, fix, verify_fix  # noqa: E402
from .graph import Graph, graph_hash  # noqa: E402
from .io import read_graph, write_graph  # noqa: E402
from .lifts import LiftPipelineConfig, lift_pipeline, random_signing, replay_pipeline, two_lift  # noqa: E402
from .sampler import SamplerConfig, sample, sample_graph  # noqa: E402
from .spectral import full_spectrum, signed_spectral_radius, spectrum_summary  # noqa: E402

__all__ = [
    "Cycle", "FixParams", "FixPlan", "Graph", "LiftPipelineConfig", "SamplerConfig",
    "analyze", "bicycle_free_radius", "enumerate_short_cycles", "fix", "full_spectrum", "girth",
    "graph_hash", "is_bicycle_free", "lift_pipeline", "random_signing", "read_graph", "replay_pipeline",
    "sample", "sample_graph", "signed_spectral_radius", "spectrum_summary", "two_lift", "verify_fix",
    "write_graph",
]
