"""Graph-to-point-set gadgets for continuous clustering in l-infinity.

Each vertex of an oriented graph becomes a point with one coordinate per
arc.  In the standard variant a vertex scores +2 on its out-arcs and -2
on its in-arcs; centers built from independent sets sit at +/-1 and hit
their vertices at distance exactly 1.  Any center serving both endpoints
of an arc pays total distance at least 4 for the pair (at least 8 in
squared cost), so disjoint induced edges certify lower bounds.

The lattice variant uses half-integer coordinates (1.5 / -0.5 / 0.5) so
that 0/1 centers serve covered vertices at distance exactly 0.5 while
integral centers can never come closer than 0.5 to any point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .metrics import (
    CapExceeded,
    Clustering,
    PointSet,
    brute_force_cluster,
    objective_cost,
)

INDEPENDENCE_CAP = 20


@dataclass
class OrientedGraph:
    """Simple graph with one ordered arc per edge, no self-loops."""

    n: int
    arcs: list[tuple[int, int]]

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v in self.arcs:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError("arc endpoint out of range")
            if (u, v) in seen or (v, u) in seen:
                raise ValueError("duplicate edge")
            seen.add((u, v))
            norm.append((u, v))
        self.arcs = norm

    def adjacency_masks(self) -> list[int]:
        adj = [0] * self.n
        for u, v in self.arcs:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj


def orient_edges(n: int, edges: Sequence[Sequence[int]]) -> OrientedGraph:
    """Lexicographic orientation: each undirected {u, v} becomes (min, max),
    and the arc list is sorted."""
    arcs = sorted((min(int(u), int(v)), max(int(u), int(v))) for u, v in edges)
    return OrientedGraph(n=n, arcs=arcs)


@dataclass
class GadgetInstance:
    graph: OrientedGraph
    points: PointSet
    variant: str
    independent_sets: Optional[list[tuple[int, ...]]] = None


def build_gadget(graph: OrientedGraph, variant: str = "standard") -> GadgetInstance:
    """One point per vertex, one coordinate per arc.

    standard: +2 on out-arcs, -2 on in-arcs, 0 elsewhere.
    lattice:  1.5 on out-arcs, -0.5 on in-arcs, 0.5 elsewhere.
    """
    m = len(graph.arcs)
    if variant == "standard":
        pts = np.zeros((graph.n, m))
        hi, lo = 2.0, -2.0
    elif variant == "lattice":
        pts = np.full((graph.n, m), 0.5)
        hi, lo = 1.5, -0.5
    else:
        raise ValueError(f"unknown variant {variant!r}")
    for e, (u, v) in enumerate(graph.arcs):
        pts[u, e] = hi
        pts[v, e] = lo
    return GadgetInstance(
        graph=graph,
        points=PointSet(dim=m, points=pts, metric="linf"),
        variant=variant,
    )


def _check_independent(graph: OrientedGraph, vertex_sets: Sequence[Sequence[int]]):
    seen: set[int] = set()
    for vs in vertex_sets:
        s = set(int(v) for v in vs)
        if s & seen:
            raise ValueError("independent sets must be disjoint")
        seen |= s
        for u, v in graph.arcs:
            if u in s and v in s:
                raise ValueError(f"arc ({u}, {v}) lies inside a vertex set")


def build_centers(
    gadget: GadgetInstance, independent_sets: Sequence[Sequence[int]]
) -> np.ndarray:
    """One center per independent set.

    standard: coordinate (u, v) is +1 if u is in the set, -1 if v is,
    else 0.  lattice: 1 if u is in the set, else 0.  Covered vertices end
    up at distance exactly 1 (standard) or 0.5 (lattice) from their
    center.
    """
    _check_independent(gadget.graph, independent_sets)
    m = len(gadget.graph.arcs)
    k = len(independent_sets)
    centers = np.zeros((k, m))
    for i, vs in enumerate(independent_sets):
        s = set(int(v) for v in vs)
        for e, (u, v) in enumerate(gadget.graph.arcs):
            if gadget.variant == "standard":
                if u in s:
                    centers[i, e] = 1.0
                elif v in s:
                    centers[i, e] = -1.0
            else:
                centers[i, e] = 1.0 if u in s else 0.0
    return centers


def completeness_certificate(
    gadget: GadgetInstance,
    independent_sets: Sequence[Sequence[int]],
    objective: str,
) -> tuple[float, Clustering]:
    """Exact cost of the clustering induced by independent sets.

    Vertex v joins the first set containing it; uncovered vertices join
    cluster 0.  The exact cost is checked against the closed-form ceiling
    (covered vertices pay exactly the covered rate, stragglers at most
    the worst-case rate) before returning.
    """
    sets = [tuple(int(v) for v in vs) for vs in independent_sets]
    centers = build_centers(gadget, sets)
    n = gadget.graph.n
    assignment = np.zeros(n, dtype=int)
    covered = np.zeros(n, dtype=bool)
    for i, vs in enumerate(sets):
        for v in vs:
            assignment[v] = i
            covered[v] = True
    clustering = Clustering(k=len(sets), assignment=assignment, centers=centers)
    cost = objective_cost(gadget.points, clustering, objective).assigned
    n_cov = int(covered.sum())
    n_unc = n - n_cov
    if gadget.variant == "standard":
        covered_rate, worst = (1.0, 9.0) if objective == "means" else (1.0, 3.0)
    else:
        covered_rate, worst = (0.25, 2.25) if objective == "means" else (0.5, 1.5)
    ceiling = covered_rate * n_cov + worst * n_unc
    if cost > ceiling + 1e-9:
        raise AssertionError("certificate cost exceeds its closed-form ceiling")
    return cost, clustering


def greedy_disjoint_edges(
    graph: OrientedGraph, cluster_vertices: Sequence[int], threshold: int = 0
) -> list[tuple[int, int]]:
    """Vertex-disjoint induced edges, picked greedily.

    Scans arcs in sorted order, takes the first arc with both endpoints
    still present, and removes the endpoints; stops when fewer than
    threshold vertices remain or no induced arc is left.
    """
    remaining = set(int(v) for v in cluster_vertices)
    arcs = sorted(graph.arcs)
    matching: list[tuple[int, int]] = []
    while len(remaining) >= max(threshold, 2):
        pick = None
        for u, v in arcs:
            if u in remaining and v in remaining:
                pick = (u, v)
                break
        if pick is None:
            break
        matching.append(pick)
        remaining.discard(pick[0])
        remaining.discard(pick[1])
    return matching


def _pair_rate(variant: str, objective: str, integral_centers: bool = False) -> float:
    """Certified minimum total cost one center pays for an arc's endpoints.

    standard: d(A(u), c) + d(A(v), c) >= 4 for any real center, and the
    squared version is at least 8.  lattice: the endpoint coordinates on
    the shared arc differ by 2, so the two distances sum to at least 2
    for any real center (squared: at least 2, by 1 + 1 at the midpoint);
    restricting to integral centers pushes the squared rate to 2.5.
    """
    if variant == "standard":
        return 8.0 if objective == "means" else 4.0
    if objective == "means":
        return 2.5 if integral_centers else 2.0
    return 2.0


def soundness_lower_bound(
    gadget: GadgetInstance,
    clustering: Clustering,
    objective: str,
    integral_centers: bool = False,
) -> tuple[float, list[list[tuple[int, int]]]]:
    """Lower bound the cost of a given clustering via disjoint edges.

    Each cluster contributes pair-rate times the size of a greedy
    vertex-disjoint induced edge set; pair inequalities make this a valid
    bound for any choice of centers (integral_centers selects the rate
    certified only against integer-coordinate centers).
    """
    rate = _pair_rate(gadget.variant, objective, integral_centers)
    matchings = []
    total = 0.0
    for idx in clustering.clusters():
        m = greedy_disjoint_edges(gadget.graph, idx.tolist())
        matchings.append(m)
        total += rate * len(m)
    return total, matchings


@dataclass
class GlobalSoundness:
    lower_bound: float
    minimizing_partition: list[int]
    exact_cost: float
    exact_clustering: Clustering
    bound_holds: bool


def global_soundness_lb(
    gadget: GadgetInstance, r: int, objective: str, tol: float = 1e-7
) -> GlobalSoundness:
    """Best-case matching bound over all partitions, against the true optimum.

    Minimizes the per-cluster matching bound over every partition of the
    vertices into at most r parts (per-subset matchings memoized), then
    solves the continuous problem exactly by enumeration with convex
    center solves.  The minimized bound can never exceed the true cost.
    """
    from .metrics import iter_partitions, _rgs_blocks

    n = gadget.graph.n
    rate = _pair_rate(gadget.variant, objective)
    memo: dict[tuple[int, ...], int] = {}

    def msize(key: tuple[int, ...]) -> int:
        if key not in memo:
            memo[key] = len(greedy_disjoint_edges(gadget.graph, key))
        return memo[key]

    best = math.inf
    best_rgs: Optional[list[int]] = None
    for rgs in iter_partitions(n, r):
        total = sum(msize(tuple(b)) for b in _rgs_blocks(rgs))
        if rate * total < best:
            best = rate * total
            best_rgs = rgs
    assert best_rgs is not None

    clustering, exact = brute_force_cluster(
        gadget.points, r, objective, mode="continuous", tol=tol
    )
    return GlobalSoundness(
        lower_bound=best,
        minimizing_partition=best_rgs,
        exact_cost=exact,
        exact_clustering=clustering,
        bound_holds=best <= exact + 1e-9,
    )


@dataclass
class GapReport:
    """Completeness upper bound vs soundness lower bound for one instance."""

    completeness_ub: float
    soundness_lb: float
    ratio: float
    certificate: Optional[object] = None
    details: dict = field(default_factory=dict)


def independence_number(graph: OrientedGraph, cap: int = INDEPENDENCE_CAP) -> int:
    """Exact maximum independent set size by branch and bound."""
    if graph.n > cap:
        raise CapExceeded(f"n={graph.n} exceeds independence cap {cap}")
    adj = graph.adjacency_masks()
    memo: dict[int, int] = {}

    def mis(avail: int) -> int:
        if avail == 0:
            return 0
        if avail in memo:
            return memo[avail]
        v = (avail & -avail).bit_length() - 1
        without = mis(avail & ~(1 << v))
        with_v = 1 + mis(avail & ~((1 << v) | adj[v]))
        memo[avail] = max(without, with_v)
        return memo[avail]

    return mis((1 << graph.n) - 1)


def generate_yes_graph(
    n: int, q: int, eps_prime: float, seed: int, p: float = 0.5
) -> tuple[OrientedGraph, list[tuple[int, ...]]]:
    """Graph with q planted disjoint independent sets of size
    floor((1 - eps_prime) * n / q), random edges everywhere else."""
    if not 0 <= eps_prime < 1:
        raise ValueError("eps_prime must lie in [0, 1)")
    size = int(math.floor((1.0 - eps_prime) * n / q))
    if size < 1 or q * size > n:
        raise ValueError("no room for q planted sets")
    sets = [tuple(range(i * size, (i + 1) * size)) for i in range(q)]
    block = np.full(n, -1, dtype=int)
    for i, vs in enumerate(sets):
        for v in vs:
            block[v] = i
    rng = np.random.default_rng(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if block[u] >= 0 and block[u] == block[v]:
                continue
            if rng.random() < p:
                edges.append((u, v))
    return orient_edges(n, edges), sets


def generate_no_graph(
    n: int,
    max_alpha_fraction: float,
    seed: int,
    p: float = 0.6,
    budget: int = 200,
) -> OrientedGraph:
    """Random graph resampled until its independence number is at most
    max_alpha_fraction * n; raises after budget failures."""
    rng = np.random.default_rng(seed)
    target = max_alpha_fraction * n + 1e-9
    for _ in range(budget):
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        ]
        g = orient_edges(n, edges)
        if independence_number(g) <= target:
            return g
    raise RuntimeError(f"no graph with alpha <= {max_alpha_fraction} * n in {budget} draws")


@dataclass
class IntegralCenterReport:
    """Exhaustive audit of integral centers for a lattice gadget.

    Integral centers are enumerated over the box [-box, box]^m; any
    coordinate outside the box is at least |c_e| - 1.5 >= box - 1.5 away
    from every point's half-integer coordinate, so for box >= 2 the box
    already contains all minimizers of every point distance.
    """

    min_point_distance: float
    min_pair_sum_median: float
    min_pair_sum_means: float
    best_center_cost_median: float
    best_center_cost_means: float


def lattice_integral_report(
    gadget: GadgetInstance, box: int = 3, cap: int = 10**6
) -> IntegralCenterReport:
    """Measure how well integral centers can do against a lattice gadget."""
    if gadget.variant != "lattice":
        raise ValueError("integral-center audit applies to the lattice variant")
    m = len(gadget.graph.arcs)
    if (2 * box + 1) ** m > cap:
        raise CapExceeded("integral center box too large to enumerate")
    pts = gadget.points.points
    arcs = gadget.graph.arcs
    min_pt = math.inf
    min_pair_med = math.inf
    min_pair_mea = math.inf
    best_med = math.inf
    best_mea = math.inf
    for c in itertools.product(range(-box, box + 1), repeat=m):
        ca = np.array(c, dtype=float)
        d = np.abs(pts - ca).max(axis=1)
        min_pt = min(min_pt, float(d.min()))
        best_med = min(best_med, float(d.sum()))
        best_mea = min(best_mea, float((d * d).sum()))
        for e, (u, v) in enumerate(arcs):
            pair = d[u] + d[v]
            min_pair_med = min(min_pair_med, float(pair))
            min_pair_mea = min(min_pair_mea, float(d[u] ** 2 + d[v] ** 2))
    return IntegralCenterReport(
        min_point_distance=min_pt,
        min_pair_sum_median=min_pair_med,
        min_pair_sum_means=min_pair_mea,
        best_center_cost_median=best_med,
        best_center_cost_means=best_mea,
    )
