"""Set systems, max coverage, and incidence-graph structure.

A set system is a universe [0, n) with an ordered list of subsets.  The
incidence graph is bipartite (elements on one side, sets on the other);
its girth controls how tree-like small element neighborhoods are, which
the lifting and minsum reductions both rely on.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .metrics import CapExceeded

BRUTE_COVERAGE_CAP = 10**6
GIRTH_CAP = 20


@dataclass
class SetSystem:
    """Universe size n plus a list of strictly increasing element tuples.

    Duplicate sets are permitted (the list is a multiset).  Empty sets are
    rejected unless allow_empty is on; duals of systems with isolated
    elements need the flag.
    """

    n: int
    sets: list[tuple[int, ...]]
    allow_empty: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("universe size must be nonnegative")
        norm = []
        for s in self.sets:
            t = tuple(int(x) for x in s)
            if not t and not self.allow_empty:
                raise ValueError("empty set (pass allow_empty to keep it)")
            if any(b <= a for a, b in zip(t, t[1:])):
                raise ValueError("set elements must be strictly increasing")
            if t and (t[0] < 0 or t[-1] >= self.n):
                raise ValueError("set elements must lie in [0, n)")
            norm.append(t)
        self.sets = norm

    def __len__(self) -> int:
        return len(self.sets)

    def masks(self) -> list[int]:
        return [sum(1 << e for e in s) for s in self.sets]

    def uniformity(self) -> Optional[int]:
        """Common set size, or None if sizes differ or there are no sets."""
        sizes = {len(s) for s in self.sets}
        return sizes.pop() if len(sizes) == 1 else None

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for s in self.sets:
            for e in s:
                deg[e] += 1
        return deg


def covered(system: SetSystem, chosen: Sequence[int]) -> int:
    """Number of universe elements covered by the chosen set indices."""
    masks = system.masks()
    u = 0
    for i in chosen:
        u |= masks[i]
    return u.bit_count()


def greedy_max_coverage(system: SetSystem, k: int) -> list[int]:
    """Pick k sets greedily by marginal coverage, smallest index on ties.

    If k exceeds the number of sets, the remaining slots are padded with
    the smallest unused indices (a warning is emitted) so the result
    always has min(k, ...) meaningful picks and length k when possible.
    """
    m = len(system.sets)
    if k < 0:
        raise ValueError("k must be nonnegative")
    masks = system.masks()
    chosen: list[int] = []
    used = [False] * m
    cover = 0
    for _ in range(min(k, m)):
        best_gain = -1
        best_i = -1
        for i in range(m):
            if used[i]:
                continue
            gain = (cover | masks[i]).bit_count() - cover.bit_count()
            if gain > best_gain:
                best_gain = gain
                best_i = i
        chosen.append(best_i)
        used[best_i] = True
        cover |= masks[best_i]
    if k > m:
        warnings.warn(f"k={k} exceeds the {m} available sets; padding")
        chosen.extend(i for i in range(m) if not used[i])
    return chosen


def brute_force_max_coverage(
    system: SetSystem, k: int, cap: int = BRUTE_COVERAGE_CAP
) -> tuple[tuple[int, ...], int]:
    """Best k-subset of sets by exhaustive enumeration.

    Ties break to the lexicographically smallest index tuple.  Raises
    CapExceeded when C(m, k) would exceed cap.
    """
    m = len(system.sets)
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= number of sets")
    if math.comb(m, k) > cap:
        raise CapExceeded(f"C({m},{k}) exceeds enumeration cap {cap}")
    masks = system.masks()
    best_cov = -1
    best: tuple[int, ...] = ()
    for combo in itertools.combinations(range(m), k):
        u = 0
        for i in combo:
            u |= masks[i]
        c = u.bit_count()
        if c > best_cov:
            best_cov = c
            best = combo
    return best, best_cov


# ---------------------------------------------------------------------------
# incidence graph


def _incidence_adjacency(system: SetSystem) -> list[list[int]]:
    """Bipartite adjacency: nodes 0..n-1 are elements, n..n+m-1 are sets."""
    n = system.n
    adj: list[list[int]] = [[] for _ in range(n + len(system.sets))]
    for j, s in enumerate(system.sets):
        for e in s:
            adj[e].append(n + j)
            adj[n + j].append(e)
    for nbrs in adj:
        nbrs.sort()
    return adj


def _shortest_cycle_through_edge(
    adj: list[list[int]], a: int, b: int, limit: int
) -> Optional[list[int]]:
    """Shortest cycle containing edge (a, b), as a node list, or None.

    Searches for the shortest a-b path avoiding the edge itself, by
    breadth-first search truncated at limit - 1 hops; the cycle closes the
    path with the edge.  Adjacency lists are pre-sorted, so the breadth
    first tree (and hence the returned cycle) is canonical.
    """
    parent = {b: -1}
    frontier = [b]
    depth = 0
    while frontier and depth < limit - 1:
        depth += 1
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if u == b and v == a:
                    continue
                if v in parent:
                    continue
                parent[v] = u
                if v == a:
                    path = [a]
                    while path[-1] != b:
                        path.append(parent[path[-1]])
                    return path
                nxt.append(v)
        frontier = nxt
    return None


def shortest_incidence_cycle(
    system: SetSystem, limit: int
) -> Optional[tuple[int, list[int]]]:
    """First shortest incidence cycle of length <= limit, scanning
    incidence edges in (element, set-index) order.  Returns (length,
    nodes) with set nodes offset by n, or None."""
    adj = _incidence_adjacency(system)
    n = system.n
    best_len = limit + 1
    best: Optional[list[int]] = None
    for e in range(n):
        for sn in adj[e]:
            cyc = _shortest_cycle_through_edge(adj, e, sn, best_len - 1)
            if cyc is not None and len(cyc) < best_len:
                best_len = len(cyc)
                best = cyc
                if best_len == 4:
                    return best_len, best
    if best is None:
        return None
    return best_len, best


def incidence_girth(system: SetSystem, cap: int = GIRTH_CAP) -> float:
    """Girth of the element-set incidence graph, or inf if above cap.

    Girth here is the number of nodes (equivalently edges) on a shortest
    cycle; incidence graphs are bipartite so all values are even and at
    least 4.  math.inf means acyclic or girth exceeding cap.
    """
    found = shortest_incidence_cycle(system, cap)
    return math.inf if found is None else float(found[0])


@dataclass
class StructureStats:
    max_element_degree: int
    max_set_size: int
    max_pairwise_intersection: int
    girth: float
    girth_cap: int


def structure_stats(system: SetSystem, girth_cap: int = GIRTH_CAP) -> StructureStats:
    """Degree, size, intersection, and girth summary of a set system."""
    deg = system.degrees()
    masks = system.masks()
    inter = 0
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            inter = max(inter, (masks[i] & masks[j]).bit_count())
    return StructureStats(
        max_element_degree=int(deg.max(initial=0)),
        max_set_size=max((len(s) for s in system.sets), default=0),
        max_pairwise_intersection=inter,
        girth=incidence_girth(system, girth_cap),
        girth_cap=girth_cap,
    )


def dual(system: SetSystem) -> SetSystem:
    """Dual system: universe = set indices; element i maps to the tuple of
    sets containing it.  Isolated elements become empty dual sets, kept
    with allow_empty."""
    stars: list[list[int]] = [[] for _ in range(system.n)]
    for j, s in enumerate(system.sets):
        for e in s:
            stars[e].append(j)
    has_empty = any(not st for st in stars)
    return SetSystem(
        n=len(system.sets),
        sets=[tuple(st) for st in stars],
        allow_empty=has_empty,
    )


def random_uniform_system(
    n: int, m: int, r: int, rng: np.random.Generator
) -> SetSystem:
    """m sets of size r drawn uniformly without replacement per set."""
    if r > n:
        raise ValueError("set size exceeds universe")
    sets = []
    for _ in range(m):
        pick = rng.choice(n, size=r, replace=False)
        sets.append(tuple(sorted(int(x) for x in pick)))
    return SetSystem(n=n, sets=sets)
