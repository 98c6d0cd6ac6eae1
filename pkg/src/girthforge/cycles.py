"""Girth, short-cycle enumeration and bicycle-freeness.

Cycles are subgraph cycles (each simple cycle counted once), identified by
vertex sequence *and* edge ids, so a loop is a 1-cycle and every pair of
parallel edges is a 2-cycle.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import EnumerationBudgetError, PreconditionError
from .graph import Graph, regular_degree

INF = math.inf
DEFAULT_BUDGET = 10**7


@dataclass(frozen=True, order=True)
class Cycle:
    """A cycle ``v0 -e0- v1 -e1- ... v(k-1) -e(k-1)- v0``.

    Instances built through :func:`canonical_cycle` are rotated/reflected
    to the lexicographically smallest ``(vertices, edges)`` form, so two
    canonical cycles compare equal iff they are the same cycle.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": list(self.edges)}


def canonical_cycle(vertices, edges) -> Cycle:
    vs, es = tuple(int(v) for v in vertices), tuple(int(e) for e in edges)
    k = len(vs)
    if k == 0 or len(es) != k:
        raise ValueError("a cycle needs as many edges as vertices (at least one)")
    rev_v = (vs[0],) + vs[:0:-1]
    rev_e = es[::-1]
    best = None
    for seq_v, seq_e in ((vs, es), (rev_v, rev_e)):
        for j in range(k):
            cand = (seq_v[j:] + seq_v[:j], seq_e[j:] + seq_e[:j])
            if best is None or cand < best:
                best = cand
    return Cycle(*best)


def canonical(c: Cycle) -> Cycle:
    return canonical_cycle(c.vertices, c.edges)


def is_valid_cycle(g: Graph, c: Cycle) -> bool:
    """Consecutive vertices joined by the listed (distinct) edges, vertices distinct."""
    k = c.length
    if len(set(c.vertices)) != k or len(set(c.edges)) != k:
        return False
    for i, e in enumerate(c.edges):
        if not 0 <= e < g.m:
            return False
        a, b = c.vertices[i], c.vertices[(i + 1) % k]
        if tuple(g.edges[e]) != (min(a, b), max(a, b)):
            return False
    return True


# -- ball excess (|E| - |V| of induced balls), vectorized over vertices ------

def _ball_rows(block, n):
    b = len(block)
    return sp.csr_matrix((np.ones(b, dtype=bool), np.asarray(block), np.arange(b + 1)), shape=(b, n))


def _iter_ball_excess(g: Graph, max_radius: int, block_size: int = 2048):
    """Yield ``(block, radius, excess, grew)`` for radii ``0..max_radius``.

    ``excess[i]`` is ``|E| - |V|`` of the subgraph induced on the radius ball
    around ``block[i]``; ``grew`` tells whether any ball grows at the next
    radius.  Consumers may stop a block early by sending ``True``.
    """
    A = g.adjacency_matrix()
    for start in range(0, g.n, block_size):
        block = np.arange(start, min(start + block_size, g.n))
        B = _ball_rows(block, g.n)
        for k in range(max_radius + 1):
            BA = B @ A
            edges = np.asarray(BA.multiply(B).sum(axis=1)).ravel() / 2
            excess = edges - B.getnnz(axis=1)
            nxt = (BA + B).astype(bool)
            grew = nxt.nnz > B.nnz
            stop = yield block, k, excess, grew
            if stop or not grew:
                break
            B = nxt


def ball_excess(g: Graph, radius: int) -> np.ndarray:
    """``|E| - |V|`` of the induced radius-``radius`` ball around every vertex."""
    out = np.empty(g.n)
    for block, k, excess, grew in _iter_ball_excess(g, radius):
        if k == radius or not grew:
            out[block] = excess
    return out


def bicycle_free_radius(g: Graph, cap: int | None = None) -> int:
    """Largest ``r <= n`` with every radius-``r`` ball holding at most one cycle.

    Balls are connected, so "at most one cycle" is ``|E| <= |V|``.  Returns 0
    when even a 0-ball fails.  With ``cap`` the answer is ``min(true, cap)``,
    which is cheaper when only ``radius >= cap`` matters.
    """
    best = g.n if cap is None else min(cap, g.n)
    if best <= 0:
        return 0
    gen = _iter_ball_excess(g, best)
    stop = None
    while True:
        try:
            block, k, excess, grew = gen.send(stop)
        except StopIteration:
            break
        stop = None
        if k > best:
            stop = True
            continue
        if excess.max() >= 1:
            best = max(k - 1, 0)
            stop = True
            if k == 0:
                return 0
        elif k == best:
            stop = True
    return best


def is_bicycle_free(g: Graph, r: int) -> bool:
    return bicycle_free_radius(g, cap=r) >= r


# -- girth ---------------------------------------------------------------------

def two_core(g: Graph) -> np.ndarray:
    """Boolean mask of vertices in the 2-core (every cycle lives there)."""
    deg = g.degrees.copy()
    alive = np.ones(g.n, dtype=bool)
    adj = g.adjacency
    stack = [v for v in range(g.n) if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for w, _ in adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    stack.append(w)
    return alive


def girth(g: Graph) -> float | int:
    """Length of a shortest cycle; ``math.inf`` for forests.

    BFS from every 2-core vertex, pruned once the current depth cannot beat
    the best cycle seen.  A loop gives 1 and a parallel pair gives 2.
    """
    if g.m == 0:
        return INF
    if len(g.loops()):
        return 1
    core = two_core(g)
    if not core.any():
        return INF
    adj = g.adjacency
    best = INF
    for s in np.flatnonzero(core).tolist():
        dist = {s: 0}
        parent_edge = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du >= best:
                break
            pe = parent_edge[u]
            for w, e in adj[u]:
                if e == pe or not core[w]:
                    continue
                dw = dist.get(w)
                if dw is None:
                    dist[w] = du + 1
                    parent_edge[w] = e
                    queue.append(w)
                elif du + dw + 1 < best:
                    best = du + dw + 1
        if best <= 2:
            break
    return best


# -- enumeration ---------------------------------------------------------------

def enumerate_short_cycles(g: Graph, limit: int, budget: int = DEFAULT_BUDGET) -> list[Cycle]:
    """Every cycle of length ``<= limit``, once each, in canonical form.

    Sorted by ``(length, vertices, edges)``.  Raises
    :class:`EnumerationBudgetError` past ``budget`` cycles.
    """
    if limit < 1:
        return []
    found: list[Cycle] = []

    def emit(c):
        found.append(c)
        if len(found) > budget:
            raise EnumerationBudgetError(
                f"more than {budget} cycles of length <= {limit}; graph is not in the sparse-cycle regime"
            )

    for e in g.loops().tolist():
        v = int(g.edges[e, 0])
        emit(Cycle((v,), (e,)))
    if limit >= 2:
        groups = defaultdict(list)
        for e, (u, v) in enumerate(g.edges.tolist()):
            if u != v:
                groups[(u, v)].append(e)
        for (u, v), ids in sorted(groups.items()):
            for i in range(len(ids)):
                for j in range(i + 1, len(ids)):
                    emit(Cycle((u, v), (ids[i], ids[j])))
    if limit >= 3:
        _enumerate_long(g, limit, emit)
    found.sort(key=lambda c: (c.length, c.vertices, c.edges))
    return found


def _enumerate_long(g: Graph, limit: int, emit) -> None:
    # Only vertices whose floor(limit/2)-ball holds a cycle can lie on one.
    candidate = (ball_excess(g, limit // 2) >= 0).tolist()
    adj = g.adjacency
    half = limit // 2
    for s in range(g.n):
        if not candidate[s]:
            continue
        # distances from s inside the allowed region {s} + {w > s, candidate}
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if du >= half:
                continue
            for w, _ in adj[u]:
                if w > s and candidate[w] and w not in dist:
                    dist[w] = du + 1
                    queue.append(w)
        if len(dist) < 3:
            continue
        path = [s]
        on_path = {s}
        edge_path: list[int] = []

        def extend(x, last_edge):
            k = len(edge_path)
            for w, e in adj[x]:
                if e == last_edge or w == x:
                    continue
                if w == s:
                    if k >= 2 and path[1] < path[-1]:
                        emit(Cycle(tuple(path), tuple(edge_path) + (e,)))
                    continue
                dw = dist.get(w)
                if dw is None or w in on_path or k + 1 + dw > limit:
                    continue
                path.append(w)
                on_path.add(w)
                edge_path.append(e)
                extend(w, e)
                edge_path.pop()
                on_path.discard(w)
                path.pop()

        extend(s, -1)


def cycle_counts(cycles, limit: int | None = None) -> dict[int, int]:
    counts = Counter(c.length for c in cycles)
    if limit is not None:
        return {k: counts.get(k, 0) for k in range(1, limit + 1)}
    return dict(sorted(counts.items()))


@dataclass
class CycleReport:
    girth: float | int
    bicycle_free_radius: int
    counts: dict[int, int] = field(default_factory=dict)
    cycles: list[Cycle] | None = None

    def to_dict(self) -> dict:
        out = {
            "girth": "inf" if self.girth == INF else int(self.girth),
            "bicycle_free_radius": int(self.bicycle_free_radius),
            "counts": {str(k): int(v) for k, v in self.counts.items()},
        }
        if self.cycles is not None:
            out["cycles"] = [c.to_dict() for c in self.cycles]
        return out


def analyze(g: Graph, cycles_up_to: int | None = None, with_cycles: bool = True) -> CycleReport:
    report = CycleReport(girth=girth(g), bicycle_free_radius=bicycle_free_radius(g))
    if cycles_up_to:
        cycles = enumerate_short_cycles(g, cycles_up_to)
        report.counts = cycle_counts(cycles, cycles_up_to)
        if with_cycles:
            report.cycles = cycles
    return report


# -- (r, Lambda, tau) and counting bounds ---------------------------------------

def verify_rlt(g: Graph, r: int, Lambda: float, tau: int, tol: float | None = None):
    """Check the three conditions of an ``(r, Lambda, tau)``-graph.

    Returns ``(ok, report)``; ``report["failed"]`` names the failing
    conditions among ``"bicycle_free"``, ``"lambda"``, ``"cycle_count"``.
    """
    from .spectral import spectrum_summary

    bfr = bicycle_free_radius(g, cap=r)
    n_short = len(enumerate_short_cycles(g, r))
    summary = spectrum_summary(g, tol=tol)
    failed = []
    if bfr < r:
        failed.append("bicycle_free")
    if summary.lam > Lambda + summary.tolerance:
        failed.append("lambda")
    if n_short > tau:
        failed.append("cycle_count")
    report = {
        "r": r, "Lambda": Lambda, "tau": tau,
        "bicycle_free_radius_at_least": bfr,
        "lambda": summary.lam,
        "short_cycles": n_short,
        "failed": failed,
    }
    return not failed, report


def cycle_count_bound_check(g: Graph, r: int):
    """``|Cyc_r(g)| <= n / (d-1)^r`` for a d-regular graph bicycle-free at radius ``2r``.

    Returns ``(holds, count, bound)``.
    """
    d = regular_degree(g)
    if d is None or d < 3:
        raise PreconditionError("graph must be d-regular with d >= 3", clause="regular")
    if not is_bicycle_free(g, 2 * r):
        raise PreconditionError(f"graph is not bicycle-free at radius {2 * r}", clause="bicycle_free")
    count = len(enumerate_short_cycles(g, r))
    bound = g.n / (d - 1) ** r
    return count <= bound, count, bound


def short_cycle_bounds(n: int, d: int) -> dict[int, float]:
    """``R_i = max((d-1)^i / i, ln n)`` for ``3 <= i <= floor(log_{d-1}(n) / 4)``."""
    top = math.floor(math.log(n, d - 1) / 4)
    return {i: max((d - 1) ** i / i, math.log(n)) for i in range(3, top + 1)}


def short_cycle_bound_check(g: Graph, d: int | None = None):
    """Whether ``X_i <= R_i`` for every ``i`` in the range of :func:`short_cycle_bounds`.

    Returns ``(holds, {i: (X_i, R_i)})``; an empty range holds vacuously.
    """
    d = d or regular_degree(g)
    bounds = short_cycle_bounds(g.n, d)
    if not bounds:
        return True, {}
    counts = cycle_counts(enumerate_short_cycles(g, max(bounds)), max(bounds))
    detail = {i: (counts[i], R) for i, R in bounds.items()}
    return all(x <= R for x, R in detail.values()), detail
