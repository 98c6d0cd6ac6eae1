import warnings

import numpy as np
import pytest

from girthforge.graph import Graph

from oracles import subcubic_connected_graphs

# Connected graphs with max degree <= 3, counted up to isomorphism, n = 1..8.
CORPUS_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 10, 6: 29, 7: 64, 8: 194}


def from_nx(h):
    return Graph(h.number_of_nodes(), sorted(h.edges()))


@pytest.fixture(scope="session")
def small_corpus():
    graphs = [Graph(1)] + [from_nx(h) for h in subcubic_connected_graphs(8)]
    return graphs


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def no_force_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield
