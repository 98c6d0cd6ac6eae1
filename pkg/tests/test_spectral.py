import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from girthforge.errors import SizeExceededError, SolverError
from girthforge.graph import (
    Graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    petersen_graph,
    relabel,
)
from girthforge.lifts import random_signing
from girthforge.sampler import sample_graph
from girthforge.spectral import (
    check_signing,
    full_spectrum,
    lambda_of,
    ramanujan_bound,
    signed_adjacency_matrix,
    signed_spectral_radius,
    spectrum_summary,
)

from oracles import dense_adjacency, edge_list


@st.composite
def multigraphs(draw):
    n = draw(st.integers(1, 9))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    return Graph(n, draw(st.lists(pairs, max_size=14)))


class TestSummary:
    def test_k4(self):
        s = spectrum_summary(complete_graph(4))
        assert (s.lambda1, s.lambda2, s.lambda_min) == pytest.approx((3, -1, -1), abs=1e-8)
        assert s.lam == pytest.approx(1, abs=1e-8) and s.method == "dense"

    def test_k33(self):
        s = spectrum_summary(complete_bipartite_graph(3, 3))
        assert s.lam == pytest.approx(3, abs=1e-8)
        assert full_spectrum(complete_bipartite_graph(3, 3)) == pytest.approx([3, 0, 0, 0, 0, -3], abs=1e-8)

    @pytest.mark.parametrize("n", [5, 8, 13])
    def test_cycle_lambda2(self, n):
        assert spectrum_summary(cycle_graph(n)).lambda2 == pytest.approx(2 * math.cos(2 * math.pi / n), abs=1e-8)

    def test_invariants(self):
        s = spectrum_summary(petersen_graph())
        assert s.lambda1 >= s.lambda2 >= s.lambda_min
        assert s.lam <= s.lambda1 and abs(s.lambda1 - 3) <= s.tolerance
        assert s.residual < 1e-10
        assert set(s.to_dict()) == {"lambda1", "lambda2", "lambda_min", "lambda", "method", "residual", "tolerance"}

    def test_empty_graph_rejected(self):
        with pytest.raises(ValueError):
            spectrum_summary(Graph(0))

    def test_random_graphs_near_ramanujan(self):
        hits = sum(lambda_of(sample_graph(1000, 3, s)) <= ramanujan_bound(3) + 0.2 for s in range(50))
        assert hits >= 45

    def test_alon_boppana_floor(self):
        for s in range(10):
            assert spectrum_summary(sample_graph(1000, 3, s)).lambda2 >= ramanujan_bound(3) - 0.5

    def test_relabel_invariant(self, rng):
        g = sample_graph(200, 3, 4)
        h = relabel(g, rng.permutation(g.n))
        assert lambda_of(h) == pytest.approx(lambda_of(g), abs=1e-8)

    def test_loop_on_diagonal(self):
        g = Graph(1, [(0, 0)])
        assert full_spectrum(g) == pytest.approx([2.0])


class TestIterative:
    def test_matches_dense(self):
        g = sample_graph(1500, 3, 2)
        dense = spectrum_summary(g)
        it = spectrum_summary(g, dense_threshold=100)
        assert it.method == "iterative"
        for a, b in [(dense.lambda1, it.lambda1), (dense.lambda2, it.lambda2), (dense.lambda_min, it.lambda_min)]:
            assert a == pytest.approx(b, abs=1e-5)
        assert it.residual <= 10 * it.tolerance * 3

    def test_disconnected_regular_no_deflation(self):
        g = disjoint_union(sample_graph(300, 3, 0), sample_graph(300, 3, 1))
        s = spectrum_summary(g, dense_threshold=100)
        assert s.lambda2 == pytest.approx(3, abs=1e-5)

    def test_nonconvergence(self):
        with pytest.raises(SolverError) as info:
            spectrum_summary(sample_graph(4000, 3, 0), maxiter=1)
        assert hasattr(info.value, "residual")

    def test_signed_radius_matches_dense(self):
        g = sample_graph(600, 3, 9)
        w = random_signing(g, 1)
        assert signed_spectral_radius(g, w, dense_threshold=100) == pytest.approx(
            signed_spectral_radius(g, w), abs=1e-5)


class TestSigned:
    def test_all_plus_is_degree(self):
        g = petersen_graph()
        assert signed_spectral_radius(g, np.ones(g.m)) == pytest.approx(3)

    def test_c4_one_negative(self):
        g = cycle_graph(4)
        w = np.array([1, 1, 1, -1])
        oracle = np.linalg.eigvalsh(dense_adjacency(4, edge_list(g), w))
        assert oracle == pytest.approx([-math.sqrt(2)] * 2 + [math.sqrt(2)] * 2)
        assert signed_spectral_radius(g, w) == pytest.approx(math.sqrt(2))
        assert full_spectrum(g, w) == pytest.approx(oracle[::-1])

    def test_random_signings_near_bound(self):
        g = sample_graph(512, 3, 0)
        rho = [signed_spectral_radius(g, random_signing(g, s)) for s in range(20)]
        assert sum(r <= ramanujan_bound(3) * 1.1 for r in rho) >= 15

    def test_parallel_signs_sum(self):
        g = Graph(2, [(0, 1), (0, 1)])
        assert signed_adjacency_matrix(g, [1, -1]).toarray() == pytest.approx(np.zeros((2, 2)))

    def test_bad_signing(self):
        g = cycle_graph(3)
        with pytest.raises(ValueError):
            check_signing(g, [1, 1])
        with pytest.raises(ValueError):
            check_signing(g, [1, 0, 1])


class TestFullSpectrum:
    def test_k4(self):
        assert full_spectrum(complete_graph(4)) == pytest.approx([3, -1, -1, -1], abs=1e-8)

    def test_petersen(self):
        assert full_spectrum(petersen_graph()) == pytest.approx([3] + [1] * 5 + [-2] * 4, abs=1e-8)

    def test_disjoint_union_doubles(self):
        g = petersen_graph()
        doubled = np.sort(np.repeat(full_spectrum(g), 2))[::-1]
        assert full_spectrum(disjoint_union(g, g)) == pytest.approx(doubled, abs=1e-8)

    def test_size_limit(self):
        with pytest.raises(SizeExceededError):
            full_spectrum(cycle_graph(50), dense_threshold=10)

    @given(multigraphs())
    @settings(max_examples=80, deadline=None)
    def test_traces(self, g):
        A = dense_adjacency(g.n, edge_list(g))
        ev = full_spectrum(g)
        assert ev.sum() == pytest.approx(np.trace(A), abs=1e-6)
        assert (ev**2).sum() == pytest.approx(np.trace(A @ A), abs=1e-6)
        assert np.all(np.diff(ev) <= 1e-12)
