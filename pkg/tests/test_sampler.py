import math
from collections import Counter

import numpy as np
import pytest

from girthforge.cycles import cycle_counts, enumerate_short_cycles, girth, is_bicycle_free
from girthforge.errors import ParityError, SamplingFailureError, UnsupportedDegreeError
from girthforge.graph import is_regular
from girthforge.sampler import (
    SamplerConfig,
    configuration_edges,
    default_retry_budget,
    sample,
    sample_configuration,
    sample_graph,
    sample_uniform_simple,
    substream,
)

from oracles import configuration_distribution


class TestConfig:
    def test_parity(self):
        with pytest.raises(ParityError):
            SamplerConfig(3, 3)

    def test_degree(self):
        with pytest.raises(UnsupportedDegreeError):
            SamplerConfig(6, 2)

    def test_n_greater_than_d(self):
        with pytest.raises(ValueError):
            SamplerConfig(4, 4)

    def test_seed_range(self):
        with pytest.raises(ValueError):
            SamplerConfig(4, 3, seed=2**64)
        SamplerConfig(4, 3, seed=2**64 - 1)

    def test_mode_aliases(self):
        assert SamplerConfig(4, 3, mode="config").mode == "configuration"
        assert SamplerConfig(4, 3, mode="simple").mode == "uniform-simple"
        with pytest.raises(ValueError):
            SamplerConfig(4, 3, mode="bogus")


class TestConfiguration:
    def test_small(self):
        for seed in range(20):
            g = sample_configuration(SamplerConfig(4, 3, seed))
            assert g.n == 4 and g.m == 6 and is_regular(g, 3)

    def test_deterministic(self):
        a = sample_configuration(SamplerConfig(500, 3, 7))
        b = sample_configuration(SamplerConfig(500, 3, 7))
        assert np.array_equal(a.edges, b.edges)
        c = sample_configuration(SamplerConfig(500, 3, 8))
        assert not np.array_equal(a.edges, c.edges)

    def test_substreams_differ(self):
        assert substream(1, 0).integers(2**62) != substream(1, 1).integers(2**62)

    @pytest.mark.parametrize("n,d", [(10, 3), (50, 4), (101, 4), (30, 5)])
    def test_always_regular(self, n, d):
        for seed in range(10):
            assert is_regular(sample(SamplerConfig(n, d, seed, "configuration")), d)

    def test_uniform_over_matchings(self):
        # n=4, d=2: exact law from all 105 matchings of the 8 half-edges.
        exact = configuration_distribution(4, 2)
        seeds = 100_000
        hits = Counter()
        for s in range(seeds):
            e = configuration_edges(4, 2, substream(s, 0))
            hits[tuple(sorted(tuple(sorted(p)) for p in e.tolist()))] += 1
        tv = 0.5 * sum(abs(hits.get(k, 0) / seeds - p) for k, p in exact.items())
        tv += 0.5 * sum(c / seeds for k, c in hits.items() if k not in exact)
        assert tv < 0.02

    def test_triangle_mean(self):
        # Poisson mean (d-1)^3 / 6 = 4/3 for d = 3.
        counts = [cycle_counts(enumerate_short_cycles(sample_configuration(SamplerConfig(1000, 3, s)), 3), 3)[3]
                  for s in range(200)]
        se = np.std(counts, ddof=1) / math.sqrt(len(counts))
        assert abs(np.mean(counts) - 4 / 3) <= 3 * se


class TestUniformSimple:
    def test_simple_and_regular(self):
        for seed in range(5):
            g = sample_uniform_simple(SamplerConfig(1000, 3, seed))
            assert g.is_simple() and is_regular(g, 3) and girth(g) >= 3

    def test_attempt_zero_matches_configuration(self):
        for seed in range(40):
            cfg = SamplerConfig(30, 3, seed)
            g0 = sample_configuration(cfg)
            if g0.is_simple():
                assert np.array_equal(sample_uniform_simple(cfg).edges, g0.edges)
                break
        else:
            pytest.fail("no simple configuration sample in 40 seeds")

    def test_budget_exhaustion(self):
        seed = next(s for s in range(100) if not sample_configuration(SamplerConfig(30, 3, s)).is_simple())
        with pytest.raises(SamplingFailureError) as info:
            sample_uniform_simple(SamplerConfig(30, 3, seed), max_attempts=1)
        assert info.value.attempts == 1

    def test_default_budget(self):
        assert default_retry_budget(3) == 10 * math.ceil(math.exp(9 / 4))

    def test_mostly_bicycle_free_at_two(self):
        hits = sum(is_bicycle_free(sample_graph(1000, 3, s), 2) for s in range(100))
        assert hits >= 90
