"""Short-cycle removal on regular graphs.

``fix(g, FixParams(r))`` deletes one edge from every cycle of length
``<= r`` (the set ``E_c``), deletes a batch of mutually far-apart filler
edges (``E_t``), and repairs the degree deficit with two d-regular trees of
height ``h = ceil(log_{d-1} tau) + ceil(r/2) + 1`` whose leaves are merged
into the endpoints of the deleted edges.  Leaves are assigned in blocks: one
``E_c`` endpoint followed by ``(d-1)^ceil(r/2)`` ``E_t`` endpoints, so the
tree distance between any two ``E_c`` endpoints is at least ``r + 2``.

Every arbitrary choice is resolved by smallest label, which makes ``fix``
deterministic.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .cycles import Cycle, enumerate_short_cycles, girth, is_bicycle_free
from .errors import CapacityError, GirthforgeError, PreconditionError
from .graph import Graph, bfs_distances, graph_hash, is_regular, regular_degree

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixParams:
    r: int
    force: bool = False
    # Radius marked around each chosen edge; None means r.
    mark_radius: int | None = None

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.mark_radius is not None and self.mark_radius < 1:
            raise ValueError("mark_radius must be >= 1")

    @property
    def marking(self) -> int:
        return self.r if self.mark_radius is None else self.mark_radius


def ceil_log(x: int, base: int) -> int:
    """Smallest k >= 0 with ``base**k >= x`` (exact integer arithmetic)."""
    if x < 1:
        raise ValueError("ceil_log needs x >= 1")
    k, p = 0, 1
    while p < x:
        p *= base
        k += 1
    return k


def tree_height(tau: int, r: int, d: int) -> int:
    return ceil_log(tau, d - 1) + math.ceil(r / 2) + 1


def block_size(r: int, d: int) -> int:
    return (d - 1) ** math.ceil(r / 2)


def precondition_bound(n: int, tau: int, d: int) -> float:
    """Largest r allowed by ``r <= (2/3) log_{d-1}(n / tau) - 5``."""
    return (2 / 3) * math.log(n / tau, d - 1) - 5


# -- tree gadget ---------------------------------------------------------------

@dataclass(frozen=True)
class TreeGadget:
    """Rooted tree, root with ``d`` children, other internal vertices ``d - 1``.

    Vertices are numbered in BFS order, so internal vertices come first and
    the leaves, ``n_internal .. n_vertices - 1``, appear in the canonical
    left-to-right order.
    """

    d: int
    h: int
    parent: tuple[int, ...]

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    @property
    def n_leaves(self) -> int:
        return self.d * (self.d - 1) ** (self.h - 1)

    @property
    def n_internal(self) -> int:
        return self.n_vertices - self.n_leaves

    @property
    def leaves(self) -> range:
        return range(self.n_internal, self.n_vertices)

    def edges(self) -> list[tuple[int, int]]:
        return [(p, c) for c, p in enumerate(self.parent) if p >= 0]

    def as_graph(self) -> Graph:
        return Graph(self.n_vertices, self.edges())


def build_tree_gadget(d: int, h: int) -> TreeGadget:
    if d < 3:
        raise ValueError("tree gadgets need d >= 3")
    if h < 1:
        raise ValueError("tree height must be >= 1")
    parent = [-1]
    level = [0]
    for depth in range(h):
        fanout = d if depth == 0 else d - 1
        nxt = []
        for p in level:
            for _ in range(fanout):
                nxt.append(len(parent))
                parent.append(p)
        level = nxt
    return TreeGadget(d, h, tuple(parent))


def tree_vertex_count(d: int, h: int) -> int:
    return 1 + d * ((d - 1) ** h - 1) // (d - 2)


def leaf_distance_lower_bound(i: int, j: int, d: int) -> float:
    return 2 * (1 + math.log((abs(i - j) + 1) / d, d - 1))


def leaf_distance_bound_check(t: TreeGadget) -> bool:
    """Exhaustively compare leaf-to-leaf BFS distances with the index bound."""
    tg = t.as_graph()
    leaves = list(t.leaves)
    for a, la in enumerate(leaves):
        dist = bfs_distances(tg, [la])
        for b, lb in enumerate(leaves):
            if dist[lb] < leaf_distance_lower_bound(a, b, t.d) - 1e-12:
                return False
    return True


# -- plan ----------------------------------------------------------------------

@dataclass
class FixPlan:
    """Inspectable intermediate state of :func:`fix`.

    Endpoint tuples are aligned with their edge tuples; ``V1`` holds the
    smaller label of each edge.  ``pairing1[i]`` / ``pairing2[i]`` is the
    vertex merged into leaf ``i`` of the first / second tree.
    """

    n: int
    d: int
    r: int
    tau: int
    h: int | None = None
    E_c: tuple[int, ...] = ()
    E_t: tuple[int, ...] = ()
    V1_c: tuple[int, ...] = ()
    V2_c: tuple[int, ...] = ()
    V1_t: tuple[int, ...] = ()
    V2_t: tuple[int, ...] = ()
    pairing1: tuple[int, ...] = ()
    pairing2: tuple[int, ...] = ()
    mark_radius: int | None = None
    forced: bool = False
    warnings: list[str] = field(default_factory=list)

    @property
    def is_identity(self) -> bool:
        return self.tau == 0

    @property
    def n_leaves(self) -> int:
        return len(self.pairing1)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "r": self.r, "tau": self.tau, "h": self.h,
            "E_c": list(self.E_c), "E_t": list(self.E_t),
            "V1_c": list(self.V1_c), "V2_c": list(self.V2_c),
            "V1_t": list(self.V1_t), "V2_t": list(self.V2_t),
            "pairing1": list(self.pairing1), "pairing2": list(self.pairing2),
            "mark_radius": self.mark_radius, "forced": self.forced,
            "warnings": list(self.warnings),
        }


# -- steps ---------------------------------------------------------------------

def _edge_key(g: Graph, e: int):
    u, v = g.edges[e]
    return (int(u), int(v), e)


def select_cycle_edges(g: Graph, r: int, cycles: list[Cycle] | None = None,
                       strict: bool = True) -> tuple[int, ...]:
    """One edge per cycle of length ``<= r``: its smallest ``(u, v, id)``.

    ``strict`` demands bicycle-freeness at radius ``r`` (the short cycles
    are then vertex-disjoint).  Without it, cycles already hit by an earlier
    choice are skipped and edges touching a used endpoint are avoided, so
    the result is a hitting set that may be smaller than the cycle count.
    """
    if cycles is None:
        cycles = enumerate_short_cycles(g, r)
    if strict and cycles and not is_bicycle_free(g, r):
        raise PreconditionError(f"graph is not bicycle-free at radius {r}", clause="bicycle_free")
    chosen: list[int] = []
    chosen_set: set[int] = set()
    used: set[int] = set()
    for c in cycles:
        if strict:
            e = min(c.edges, key=lambda x: _edge_key(g, x))
            if e in chosen_set:
                raise PreconditionError("two short cycles share an edge", clause="bicycle_free")
        else:
            if chosen_set.intersection(c.edges):
                continue
            options = sorted(c.edges, key=lambda x: _edge_key(g, x))
            free = [x for x in options if not used.intersection(g.edges[x].tolist())]
            if not free:
                raise PreconditionError(
                    f"cycle {c.vertices} has no edge with unused endpoints", clause="endpoint_collision")
            e = free[0]
        chosen.append(e)
        chosen_set.add(e)
        used.update(g.edges[e].tolist())
    endpoints = [x for e in chosen for x in set(g.edges[e].tolist())]
    if len(endpoints) != len(set(endpoints)):
        raise PreconditionError("a vertex is an endpoint of two cycle edges", clause="endpoint_collision")
    return tuple(chosen)


def _mark(g: Graph, marked: np.ndarray, seeds, radius: int) -> None:
    adj = g.adjacency
    frontier = list(seeds)
    seen = set(frontier)
    for v in frontier:
        marked[v] = True
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for w, _ in adj[u]:
                if w not in seen:
                    seen.add(w)
                    marked[w] = True
                    nxt.append(w)
        frontier = nxt


def select_isolated_edges(g: Graph, E_c, r: int, needed: int,
                          mark_radius: int | None = None) -> tuple[int, ...]:
    """Greedily harvest ``needed`` filler edges far from each other and from ``E_c``.

    Marks ``B_mark({u, v})`` around every edge of ``E_c`` and every chosen
    edge, then repeatedly takes the smallest unmarked vertex and its
    smallest-label neighbor.  Every new endpoint is therefore at distance
    ``>= mark_radius`` from all earlier endpoints.
    """
    if needed < 0:
        raise ValueError("needed must be nonnegative")
    radius = r if mark_radius is None else mark_radius
    marked = np.zeros(g.n, dtype=bool)
    for e in E_c:
        _mark(g, marked, set(g.edges[e].tolist()), radius)
    adj = g.adjacency
    chosen: list[int] = []
    u = 0
    while len(chosen) < needed:
        while u < g.n and (marked[u] or all(w == u for w, _ in adj[u])):
            u += 1
        if u >= g.n:
            d = regular_degree(g) or 0
            tau = len(E_c)
            raise CapacityError(
                f"ran out of unmarked vertices after {len(chosen)} of {needed} filler edges "
                f"(n={g.n}, tau={tau}, r={r}, mark radius={radius}; "
                f"n - 6*tau*(d-1)^(3r/2+3) = {g.n - 6 * tau * (d - 1) ** (1.5 * r + 3):.0f})"
            )
        w, e = next((w, e) for w, e in adj[u] if w != u)
        chosen.append(e)
        _mark(g, marked, (u, w), radius)
    return tuple(chosen)


def pair_leaves(n_leaves: int, V1_c, V2_c, V1_t, V2_t, B: int):
    """Assign endpoints to leaf indices.

    ``E_c`` edge ``k`` takes leaf ``k * (B + 1)``; every other leaf takes the
    next ``E_t`` edge in ascending order of its first endpoint.  Both trees
    use the same leaf for the two endpoints of an edge.
    """
    tau = len(V1_c)
    if len(V1_t) + tau != n_leaves or len(V2_c) != tau or len(V2_t) != len(V1_t):
        raise GirthforgeError(
            f"cardinality mismatch: {tau} + {len(V1_t)} endpoints for {n_leaves} leaves")
    if tau and (tau - 1) * (B + 1) >= n_leaves:
        raise GirthforgeError("not enough leaves for the block layout")
    slot1: list[int | None] = [None] * n_leaves
    slot2: list[int | None] = [None] * n_leaves
    for k in range(tau):
        slot1[k * (B + 1)] = V1_c[k]
        slot2[k * (B + 1)] = V2_c[k]
    order = sorted(range(len(V1_t)), key=lambda i: (V1_t[i], V2_t[i]))
    it = iter(order)
    for leaf in range(n_leaves):
        if slot1[leaf] is None:
            i = next(it)
            slot1[leaf] = V1_t[i]
            slot2[leaf] = V2_t[i]
    return tuple(slot1), tuple(slot2)


def _endpoints(g: Graph, edge_ids):
    v1 = tuple(int(g.edges[e, 0]) for e in edge_ids)
    v2 = tuple(int(g.edges[e, 1]) for e in edge_ids)
    return v1, v2


def assemble(g: Graph, plan: FixPlan) -> Graph:
    """Build the output graph of a completed plan."""
    if plan.is_identity:
        return g
    tree = build_tree_gadget(plan.d, plan.h)
    keep = np.ones(g.m, dtype=bool)
    keep[list(plan.E_c) + list(plan.E_t)] = False
    edges = [g.edges[keep]]
    ni = tree.n_internal
    for t, pairing in enumerate((plan.pairing1, plan.pairing2)):
        offset = g.n + t * ni
        lab = np.empty(tree.n_vertices, dtype=np.int64)
        lab[:ni] = offset + np.arange(ni)
        lab[ni:] = pairing
        edges.append(lab[np.asarray(tree.edges(), dtype=np.int64)])
    return Graph(g.n + 2 * ni, np.concatenate(edges))


def fix(g: Graph, params: FixParams | int) -> tuple[Graph, FixPlan]:
    """Remove every cycle of length ``<= r`` while keeping the graph d-regular.

    New tree vertices are labeled ``n, n+1, ...`` (first tree, then second,
    BFS order); original labels are kept.  Raises
    :class:`PreconditionError` (with ``clause``) when the input is not
    regular, not bicycle-free at radius ``r``, or violates
    ``r <= (2/3) log_{d-1}(n / tau) - 5``, unless ``params.force``.
    """
    if not isinstance(params, FixParams):
        params = FixParams(int(params))
    r = params.r
    d = regular_degree(g)
    if d is None:
        raise PreconditionError("input graph is not regular", clause="regular")
    if d < 3:
        raise PreconditionError(f"fix needs d >= 3, got {d}", clause="degree")
    cycles = enumerate_short_cycles(g, r)
    tau = len(cycles)
    plan = FixPlan(n=g.n, d=d, r=r, tau=tau, mark_radius=params.marking, forced=params.force)
    if tau == 0:
        return g, plan
    problems = []
    bound = precondition_bound(g.n, tau, d)
    if r > bound:
        problems.append(("radius_bound", f"r={r} exceeds (2/3)log_{d - 1}(n/tau) - 5 = {bound:.3f}"))
    if not is_bicycle_free(g, r):
        problems.append(("bicycle_free", f"graph is not bicycle-free at radius {r}"))
    if problems and not params.force:
        clause, msg = problems[0]
        raise PreconditionError(msg, clause=clause)
    for _, msg in problems:
        plan.warnings.append(msg)
        warnings.warn(f"fix forced past precondition: {msg}", stacklevel=2)

    E_c = select_cycle_edges(g, r, cycles, strict=not params.force)
    h = tree_height(tau, r, d)
    n_leaves = d * (d - 1) ** (h - 1)
    E_t = select_isolated_edges(g, E_c, r, n_leaves - len(E_c), params.marking)
    V1_c, V2_c = _endpoints(g, E_c)
    V1_t, V2_t = _endpoints(g, E_t)
    p1, p2 = pair_leaves(n_leaves, V1_c, V2_c, V1_t, V2_t, block_size(r, d))
    plan.h = h
    plan.E_c, plan.E_t = E_c, E_t
    plan.V1_c, plan.V2_c, plan.V1_t, plan.V2_t = V1_c, V2_c, V1_t, V2_t
    plan.pairing1, plan.pairing2 = p1, p2
    out = assemble(g, plan)
    log.debug("fix: n=%d tau=%d h=%d |E_t|=%d -> n=%d", g.n, tau, h, len(E_t), out.n)
    return out, plan


def expected_vertex_count(n: int, d: int, h: int) -> int:
    """Output size when the merged leaves are not counted as new vertices."""
    return n + 2 * (tree_vertex_count(d, h) - d * (d - 1) ** (h - 1))


# -- audits ----------------------------------------------------------------------

def endpoint_separation(g: Graph, plan: FixPlan) -> int | float:
    """Smallest distance in ``g`` from a filler endpoint to any other endpoint.

    The edge's own partner endpoint is ignored.  Returns ``inf`` when there
    is nothing to compare.
    """
    partner = {}
    for a, b in zip(plan.V1_c + plan.V1_t, plan.V2_c + plan.V2_t):
        partner[a] = b
        partner[b] = a
    everything = set(partner)
    best = math.inf
    for x in set(plan.V1_t) | set(plan.V2_t):
        others = everything - {x, partner[x]}
        dist = bfs_distances(g, [x], radius=None if best == math.inf else int(best))
        for y in others:
            if y in dist and dist[y] < best:
                best = dist[y]
    return best


def leaf_block_separation(plan: FixPlan) -> int | float:
    """Smallest leaf-index gap between two cycle-edge endpoints."""
    idx = sorted(i for i, v in enumerate(plan.pairing1) if v in set(plan.V1_c))
    if len(idx) < 2:
        return math.inf
    return min(b - a for a, b in zip(idx, idx[1:]))


def filler_edges_isolated(g: Graph, plan: FixPlan) -> bool:
    """No filler edge lies on a cycle of length ``<= r`` in ``g``."""
    H = g.without_edges(plan.E_t)
    for e in plan.E_t:
        u, v = (int(x) for x in g.edges[e])
        dist = bfs_distances(H, [u], radius=plan.r - 1)
        if v in dist:
            return False
    return True


def verify_fix(g: Graph, out: Graph, plan: FixPlan) -> dict:
    """Measure the guarantees of a fix run; each entry is a bool or a number."""
    res = {"regular": is_regular(out, plan.d), "n_out": out.n}
    res["girth"] = girth(out)
    res["girth_ok"] = res["girth"] >= plan.r
    if not plan.is_identity:
        res["expected_n_out"] = expected_vertex_count(plan.n, plan.d, plan.h)
        res["vertex_count_ok"] = out.n == res["expected_n_out"]
        res["endpoint_separation"] = endpoint_separation(g, plan)
        res["leaf_block_separation"] = leaf_block_separation(plan)
        res["block_ok"] = res["leaf_block_separation"] >= block_size(plan.r, plan.d)
        res["filler_isolated"] = filler_edges_isolated(g, plan)
    res["hash"] = graph_hash(out)
    return res


def fix_injectivity_check(inputs, params: FixParams | int):
    """Run ``fix`` over pairwise-distinct inputs; outputs must be pairwise distinct.

    Returns ``(ok, output_hashes)``.
    """
    in_hashes, out_hashes = [], []
    for g in inputs:
        in_hashes.append(graph_hash(g))
        out_hashes.append(graph_hash(fix(g, params)[0]))
    if len(set(in_hashes)) != len(in_hashes):
        raise ValueError("inputs are not pairwise distinct")
    return len(set(out_hashes)) == len(out_hashes), out_hashes
