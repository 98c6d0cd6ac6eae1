"""Labeled undirected multigraphs.

Vertices are ``0..n-1``.  Edges carry stable integer ids (their position in
the edge array), so parallel edges stay distinguishable and algorithms can
remove one specific copy.  Every edge is stored with its endpoints ordered
``(min, max)``; a loop ``(v, v)`` contributes 2 to the degree of ``v``.
"""

from __future__ import annotations

import hashlib
from collections import deque
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import InvalidVertexError


class Graph:
    """Immutable labeled multigraph.

    Args:
        n: number of vertices.
        edges: iterable of ``(u, v)`` pairs; ids are assigned in order.
    """

    __slots__ = ("n", "edges", "_csr", "_adj", "_matrix", "_degrees")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        n = int(n)
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            bad = arr[(arr < 0) | (arr >= n)][0]
            raise InvalidVertexError(f"edge endpoint {int(bad)} outside 0..{n - 1}")
        arr = np.sort(arr, axis=1)
        arr.setflags(write=False)
        self.n = n
        self.edges = arr
        self._csr = None
        self._adj = None
        self._matrix = None
        self._degrees = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return graph_equal(self, other)

    def __hash__(self):
        return hash(graph_hash(self))

    # -- incidence structure -------------------------------------------------

    def incidence_arrays(self):
        """CSR-style incidence: ``(indptr, neighbor, edge_id)``.

        Incidences of each vertex are sorted by neighbor label, then edge id.
        A loop appears twice in its vertex's list.
        """
        if self._csr is None:
            u, v = self.edges[:, 0], self.edges[:, 1]
            ids = np.arange(self.m, dtype=np.int64)
            src = np.concatenate([u, v])
            dst = np.concatenate([v, u])
            eid = np.concatenate([ids, ids])
            order = np.lexsort((eid, dst, src))
            src, dst, eid = src[order], dst[order], eid[order]
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
            self._csr = (indptr, dst, eid)
        return self._csr

    @property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-vertex list of ``(neighbor, edge_id)`` incidences."""
        if self._adj is None:
            indptr, dst, eid = self.incidence_arrays()
            pairs = list(zip(dst.tolist(), eid.tolist()))
            bounds = indptr.tolist()
            self._adj = [pairs[bounds[i]:bounds[i + 1]] for i in range(self.n)]
        return self._adj

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self.adjacency[v]]

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = np.diff(self.incidence_arrays()[0])
        return self._degrees

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def adjacency_matrix(self) -> sp.csr_matrix:
        """Sparse adjacency matrix; parallel edges add, loops put 2 on the diagonal."""
        if self._matrix is None:
            indptr, dst, _ = self.incidence_arrays()
            data = np.ones(len(dst), dtype=np.float64)
            mat = sp.csr_matrix((data, dst, indptr), shape=(self.n, self.n))
            mat.sum_duplicates()
            self._matrix = mat
        return self._matrix

    def loops(self) -> np.ndarray:
        return np.flatnonzero(self.edges[:, 0] == self.edges[:, 1])

    def is_simple(self) -> bool:
        if self.m == 0:
            return True
        if len(self.loops()):
            return False
        keys = self.edges[:, 0] * self.n + self.edges[:, 1]
        return len(np.unique(keys)) == self.m

    def without_edges(self, edge_ids: Iterable[int]) -> "Graph":
        """Copy with the given edge ids removed; remaining edges keep relative order."""
        keep = np.ones(self.m, dtype=bool)
        keep[np.asarray(list(edge_ids), dtype=np.int64)] = False
        return Graph(self.n, self.edges[keep])

    def edge_list(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in self.edges.tolist()]


def check_vertices(g: Graph, vertices: Iterable[int]) -> list[int]:
    """Validate labels and return them as a sorted list of distinct ints."""
    out = sorted({int(v) for v in vertices})
    if out and (out[0] < 0 or out[-1] >= g.n):
        bad = out[0] if out[0] < 0 else out[-1]
        raise InvalidVertexError(f"vertex {bad} outside 0..{g.n - 1}")
    return out


def bfs_distances(g: Graph, seeds: Iterable[int], radius: int | None = None) -> dict[int, int]:
    """Distances from the seed set, truncated at ``radius`` when given.

    Neighbors are visited in ascending label order.
    """
    adj = g.adjacency
    dist = {v: 0 for v in check_vertices(g, seeds)}
    queue = deque(dist)
    while queue:
        u = queue.popleft()
        du = dist[u]
        if radius is not None and du >= radius:
            continue
        for w, _ in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def ball(g: Graph, seeds: Iterable[int], radius: int) -> list[int]:
    """Vertices within distance ``radius`` of any seed, sorted."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    return sorted(bfs_distances(g, seeds, radius))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph on ``vertices`` relabeled ``0..k-1`` in ascending order.

    Returns the subgraph and the list mapping new labels to original ones.
    Edge multiplicities are preserved and edges keep their relative order.
    """
    labels = check_vertices(g, vertices)
    index = np.full(g.n, -1, dtype=np.int64)
    index[labels] = np.arange(len(labels))
    mapped = index[g.edges] if g.m else np.zeros((0, 2), dtype=np.int64)
    keep = (mapped >= 0).all(axis=1)
    return Graph(len(labels), mapped[keep]), labels


def is_regular(g: Graph, d: int) -> bool:
    return bool(np.all(g.degrees == d))


def regular_degree(g: Graph) -> int | None:
    """The common degree if ``g`` is regular (and nonempty), else None."""
    if g.n == 0:
        return None
    degs = g.degrees
    return int(degs[0]) if np.all(degs == degs[0]) else None


def _sorted_edges(g: Graph) -> np.ndarray:
    if g.m == 0:
        return g.edges
    order = np.lexsort((g.edges[:, 1], g.edges[:, 0]))
    return g.edges[order]


def graph_equal(g1: Graph, g2: Graph) -> bool:
    """Labeled equality: same vertex count and identical edge multisets."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    return bool(np.array_equal(_sorted_edges(g1), _sorted_edges(g2)))


def graph_hash(g: Graph) -> str:
    """SHA-256 of the canonical (sorted) edge-list serialization."""
    h = hashlib.sha256(f"n={g.n};m={g.m};".encode())
    h.update(np.ascontiguousarray(_sorted_edges(g), dtype="<i8").tobytes())
    return h.hexdigest()


def disjoint_union(*graphs: Graph) -> Graph:
    offset = 0
    parts = []
    for g in graphs:
        parts.append(g.edges + offset)
        offset += g.n
    edges = np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int64)
    return Graph(offset, edges)


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Apply the vertex permutation ``v -> perm[v]``."""
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(g.n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    return Graph(g.n, perm[g.edges])


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    ncomp, _ = connected_components(g.adjacency_matrix(), directed=False)
    return ncomp == 1


# -- small named graphs, used by tests and demos -----------------------------

def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n == 1:
        return Graph(1, [(0, 0)])
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)
