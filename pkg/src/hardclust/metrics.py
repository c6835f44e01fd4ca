"""Core metric spaces, clustering objectives, and exact desk-scale solvers.

Point sets live in R^d under one of five distance functions; finite metrics
are given directly as a distance matrix.  Centers are unrestricted real
vectors (continuous objectives) or input points (discrete objectives).
Every randomized or iterative routine is deterministic given its inputs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

METRICS = ("linf", "l1", "l2", "l2sq", "hamming")
OBJECTIVES = ("median", "means", "minsum")

DEFAULT_PARTITION_CAP = 12
DEFAULT_TUPLE_CAP = 16
TRIANGLE_CHECK_CAP = 200


class CapExceeded(ValueError):
    """An enumeration cap would be exceeded; raise instead of running forever."""


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2:
        raise ValueError("points must form a 2-d array of shape (n, dim)")
    return arr


@dataclass
class PointSet:
    """A finite multiset of points in R^dim with a named metric.

    Hamming point sets must have 0/1 coordinates; this is validated at
    construction.  l2sq is squared Euclidean (not a metric: no triangle
    inequality), kept for k-means style objectives.
    """

    dim: int
    points: np.ndarray
    metric: str = "l2"

    def __post_init__(self):
        self.points = _as_points(self.points)
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.points.shape[1] != self.dim:
            raise ValueError("dim does not match point array width")
        if self.metric == "hamming":
            if not np.isin(self.points, (0.0, 1.0)).all():
                raise ValueError("hamming points must have 0/1 coordinates")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass
class FiniteMetric:
    """An explicit n-point metric given by its distance matrix.

    The matrix must be symmetric, nonnegative, zero on the diagonal, and
    satisfy the triangle inequality (checked over all triples for n up to
    200).  two_valued marks matrices whose off-diagonal entries are all in
    {1, 2}, the shape produced by the set-system distance reduction.
    """

    dist: np.ndarray
    two_valued: bool = False

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("dist must be a square matrix")
        if not np.allclose(d, d.T, atol=1e-12):
            raise ValueError("dist must be symmetric")
        if np.abs(np.diag(d)).max(initial=0.0) > 0:
            raise ValueError("dist must vanish on the diagonal")
        if d.size and d.min() < 0:
            raise ValueError("dist must be nonnegative")
        n = d.shape[0]
        if n <= TRIANGLE_CHECK_CAP:
            for k in range(n):
                if (d > d[:, k, None] + d[None, k, :] + 1e-9).any():
                    raise ValueError("triangle inequality violated")
        if self.two_valued:
            off = d[~np.eye(n, dtype=bool)]
            if off.size and not np.isin(off, (1.0, 2.0)).all():
                raise ValueError("two_valued metric must use distances in {1, 2}")
        self.dist = d

    def __len__(self) -> int:
        return self.dist.shape[0]

    @classmethod
    def from_points(cls, ps: PointSet) -> "FiniteMetric":
        if ps.metric == "l2sq":
            raise ValueError("l2sq is not a metric; no FiniteMetric view")
        return cls(dist=pairwise_distances(ps))


@dataclass
class Clustering:
    """An assignment of n items to k clusters, with optional centers.

    centers, when present, is a (k, dim) array of real vectors.
    center_indices records the chosen input points in discrete modes.
    Empty clusters are permitted; they contribute zero cost.
    """

    k: int
    assignment: np.ndarray
    centers: Optional[np.ndarray] = None
    center_indices: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=int)
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.assignment.size and (
            self.assignment.min() < 0 or self.assignment.max() >= self.k
        ):
            raise ValueError("assignment labels must lie in [0, k)")
        if self.centers is not None:
            self.centers = _as_points(self.centers)
            if self.centers.shape[0] != self.k:
                raise ValueError("need exactly k centers")

    def clusters(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.assignment == i) for i in range(self.k)]


def distance(p, q, metric: str = "l2") -> float:
    """Distance between two points under the named metric."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("dimension mismatch")
    diff = p - q
    if metric == "linf":
        return float(np.abs(diff).max(initial=0.0))
    if metric == "l1":
        return float(np.abs(diff).sum())
    if metric == "l2":
        return float(np.sqrt((diff * diff).sum()))
    if metric == "l2sq":
        return float((diff * diff).sum())
    if metric == "hamming":
        return float((diff != 0).sum())
    raise ValueError(f"unknown metric {metric!r}")


def pairwise_distances(ps: PointSet) -> np.ndarray:
    """All pairwise distances of a point set as an (n, n) matrix."""
    x = ps.points
    diff = x[:, None, :] - x[None, :, :]
    if ps.metric == "linf":
        return np.abs(diff).max(axis=2)
    if ps.metric == "l1":
        return np.abs(diff).sum(axis=2)
    if ps.metric == "l2":
        return np.sqrt((diff * diff).sum(axis=2))
    if ps.metric == "l2sq":
        return (diff * diff).sum(axis=2)
    if ps.metric == "hamming":
        return (diff != 0).sum(axis=2).astype(float)
    raise ValueError(f"unknown metric {ps.metric!r}")


def _point_center_distances(ps: PointSet, centers: np.ndarray) -> np.ndarray:
    """(n, k) matrix of point-to-center distances."""
    diff = ps.points[:, None, :] - centers[None, :, :]
    if ps.metric == "linf":
        return np.abs(diff).max(axis=2)
    if ps.metric == "l1":
        return np.abs(diff).sum(axis=2)
    if ps.metric == "l2":
        return np.sqrt((diff * diff).sum(axis=2))
    if ps.metric == "l2sq":
        return (diff * diff).sum(axis=2)
    if ps.metric == "hamming":
        return (diff != 0).sum(axis=2).astype(float)
    raise ValueError(f"unknown metric {ps.metric!r}")


class ObjectiveCost(NamedTuple):
    assigned: float
    nearest: float


def objective_cost(ps: PointSet, clustering: Clustering, objective: str) -> ObjectiveCost:
    """Cost of a clustering under the median or means objective.

    assigned sums each point's (squared, for means) distance to its
    assigned center; nearest re-assigns every point to its closest center
    first and is therefore never larger.
    """
    if objective not in ("median", "means"):
        raise ValueError("objective_cost handles median and means; see minsum_cost")
    if clustering.centers is None:
        raise ValueError("clustering has no centers")
    if len(clustering.assignment) != len(ps):
        raise ValueError("assignment length does not match point count")
    d = _point_center_distances(ps, clustering.centers)
    if objective == "means":
        d = d if ps.metric == "l2sq" else d * d
    assigned = float(d[np.arange(len(ps)), clustering.assignment].sum())
    nearest = float(d.min(axis=1).sum()) if len(ps) else 0.0
    return ObjectiveCost(assigned=assigned, nearest=nearest)


def minsum_cost(fm: FiniteMetric, clustering: Clustering) -> float:
    """Sum, over clusters, of all intra-cluster pairwise distances."""
    if len(clustering.assignment) != len(fm):
        raise ValueError("assignment length does not match metric size")
    total = 0.0
    for idx in clustering.clusters():
        if len(idx) >= 2:
            sub = fm.dist[np.ix_(idx, idx)]
            total += float(sub.sum()) / 2.0
    return total


def kmeans_pairwise_identity(ps: PointSet, clustering: Clustering) -> tuple[float, float]:
    """Two routes to the k-means cost of a partition of an l2 point set.

    Returns (centroid_cost, pairwise_cost): the sum of squared distances to
    cluster centroids, and sum over clusters of (1 / 2|C|) * sum of all
    squared intra-cluster pairwise distances.  The two agree exactly.
    """
    if ps.metric != "l2":
        raise ValueError("identity requires an l2 point set")
    centroid_cost = 0.0
    pairwise_cost = 0.0
    for idx in clustering.clusters():
        if len(idx) == 0:
            raise ValueError("empty cluster")
        pts = ps.points[idx]
        mu = pts.mean(axis=0)
        centroid_cost += float(((pts - mu) ** 2).sum())
        diff = pts[:, None, :] - pts[None, :, :]
        sq = (diff * diff).sum(axis=2)
        pairwise_cost += float(sq.sum()) / (2.0 * len(idx))
    return centroid_cost, pairwise_cost


# ---------------------------------------------------------------------------
# optimal centers


@dataclass
class CenterResult:
    """Best center found for one cluster, with a certified lower bound.

    cost is the exactly evaluated objective at center, so it always upper
    bounds the true optimum.  lower_bound comes from summing pair
    inequalities over a disjoint point matching (d(p,c)+d(q,c) >= d(p,q)
    for median, d(p,c)^2+d(q,c)^2 >= d(p,q)^2/2 for means) and always
    lower bounds the true optimum.  gap = cost - lower_bound; converged
    means gap <= tol.
    """

    center: np.ndarray
    cost: float
    lower_bound: float
    gap: float
    converged: bool


def _cluster_cost(pts: np.ndarray, c: np.ndarray, metric: str, objective: str) -> float:
    diff = np.abs(pts - c)
    if metric == "linf":
        per = diff.max(axis=1)
    elif metric == "l1":
        per = diff.sum(axis=1)
    elif metric == "l2":
        per = np.sqrt((diff * diff).sum(axis=1))
    elif metric == "l2sq":
        per = (diff * diff).sum(axis=1)
    elif metric == "hamming":
        per = (pts != c).sum(axis=1).astype(float)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    if objective == "means" and metric != "l2sq":
        per = per * per
    return float(per.sum())


def _matching_lower_bound(pts: np.ndarray, metric: str, objective: str) -> float:
    """Greedy farthest-pair matching; sums the per-pair inequalities."""
    s = len(pts)
    if s < 2:
        return 0.0
    sub = PointSet(dim=pts.shape[1], points=pts, metric=metric)
    d = pairwise_distances(sub)
    alive = list(range(s))
    total = 0.0
    while len(alive) >= 2:
        block = d[np.ix_(alive, alive)]
        flat = int(block.argmax())
        i, j = divmod(flat, len(alive))
        if block[i, j] <= 0:
            break
        if i > j:
            i, j = j, i
        val = block[i, j]
        total += val if objective == "median" else val * val / 2.0
        alive = [a for t, a in enumerate(alive) if t not in (i, j)]
    return total


def _subgradient_center(
    pts: np.ndarray, metric: str, objective: str, tol: float, max_iter: int
) -> CenterResult:
    """Projected subgradient descent with Polyak level steps.

    Deterministic restarts: the coordinate-wise mid-range point, then data
    points.  The level target tracks best-so-far minus a gap estimate that
    halves on stagnation; iteration stops early once the evaluated cost
    meets the certified matching lower bound within tol.
    """
    s, d = pts.shape
    lb = _matching_lower_bound(pts, metric, objective)
    midrange = (pts.min(axis=0) + pts.max(axis=0)) / 2.0
    seeds = [midrange]
    if s <= 3:
        seeds.extend(pts[i] for i in range(s))
    else:
        seeds.extend((pts[0], pts[-1]))

    best_c = None
    best_f = math.inf
    idx = np.arange(s)
    for seed in seeds:
        c = seed.astype(float).copy()
        f = _cluster_cost(pts, c, metric, objective)
        if f < best_f:
            best_f, best_c = f, c.copy()
        if best_f - lb <= tol:
            break
        delta = max((f - lb) / 2.0, 10 * tol)
        stall = 0
        for _ in range(max_iter):
            diff = c - pts
            ad = np.abs(diff)
            if metric == "linf":
                per = ad.max(axis=1)
                j = ad.argmax(axis=1)
                g = np.zeros(d)
                w = np.where(per > 0, 1.0, 0.0)
                if objective == "means":
                    w = w * 2.0 * per
                np.add.at(g, j, w * np.sign(diff[idx, j]))
            elif metric == "l1":
                per = ad.sum(axis=1)
                sg = np.sign(diff)
                if objective == "means":
                    g = (2.0 * per[:, None] * sg).sum(axis=0)
                else:
                    g = sg.sum(axis=0)
            else:
                raise ValueError(f"no subgradient path for metric {metric!r}")
            f = float(per.sum()) if objective == "median" else float((per * per).sum())
            if f < best_f - tol / 10.0:
                best_f, best_c = f, c.copy()
                stall = 0
            else:
                stall += 1
                if stall >= 50:
                    delta /= 2.0
                    stall = 0
            if best_f - lb <= tol or delta < tol / 4.0:
                break
            gg = float(g @ g)
            if gg <= 0:
                break
            target = max(lb, best_f - delta)
            c = c - ((f - target) / gg) * g
        if best_f - lb <= tol:
            break
    gap = best_f - lb
    return CenterResult(
        center=best_c, cost=best_f, lower_bound=lb, gap=gap, converged=gap <= tol
    )


def _weiszfeld_center(pts: np.ndarray, tol: float, max_iter: int) -> CenterResult:
    """Geometric median by damped fixed-point iteration.

    Steps that increase the objective are halved back toward the current
    iterate; anchor points (iterate on a data point) are tested for
    optimality and otherwise nudged off by a deterministic perturbation.
    """
    s, d = pts.shape
    lb = _matching_lower_bound(pts, "l2", "median")
    c = pts.mean(axis=0)
    f = _cluster_cost(pts, c, "l2", "median")
    for _ in range(max_iter):
        dist = np.sqrt(((pts - c) ** 2).sum(axis=1))
        on = dist < 1e-12
        if on.any():
            # Anchor optimality: pull of the other points vs multiplicity.
            rest = ~on
            if not rest.any():
                break
            pull = ((pts[rest] - c) / dist[rest, None]).sum(axis=0)
            if float(np.sqrt(pull @ pull)) <= on.sum() + 1e-12:
                break
            c = c + 1e-9 * pull
            dist = np.sqrt(((pts - c) ** 2).sum(axis=1))
        w = 1.0 / dist
        c_new = (w[:, None] * pts).sum(axis=0) / w.sum()
        f_new = _cluster_cost(pts, c_new, "l2", "median")
        halvings = 0
        while f_new > f and halvings < 30:
            c_new = (c + c_new) / 2.0
            f_new = _cluster_cost(pts, c_new, "l2", "median")
            halvings += 1
        step = float(np.abs(c_new - c).max(initial=0.0))
        improved = f - f_new
        c, f = c_new, f_new
        if step < tol / 10.0 and improved < tol / 10.0:
            break
    gap = f - lb
    return CenterResult(center=c, cost=f, lower_bound=lb, gap=gap, converged=gap <= tol)


def optimal_center(
    cluster_points,
    metric: str,
    objective: str,
    tol: float = 1e-7,
    max_iter: int = 600,
) -> CenterResult:
    """Best single center for one cluster of points.

    Closed forms where they exist (centroid for l2 means and l2sq median,
    coordinate-wise median for l1 median, coordinate-wise majority for
    hamming median); iterative convex minimization otherwise.  On
    non-convergence the best evaluated center is returned with its
    certified gap rather than raising.
    """
    pts = _as_points(cluster_points)
    if len(pts) == 0:
        raise ValueError("empty cluster")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if objective not in ("median", "means"):
        raise ValueError("optimal_center handles median and means")

    def exact(center: np.ndarray) -> CenterResult:
        cost = _cluster_cost(pts, center, metric, objective)
        return CenterResult(
            center=center, cost=cost, lower_bound=cost, gap=0.0, converged=True
        )

    if metric == "l2" and objective == "means":
        return exact(pts.mean(axis=0))
    if metric == "l2sq" and objective == "median":
        return exact(pts.mean(axis=0))
    if metric == "l2sq" and objective == "means":
        raise ValueError("squared-squared objective not supported")
    if metric == "l1" and objective == "median":
        return exact(np.median(pts, axis=0))
    if metric == "hamming":
        if objective != "median":
            raise ValueError("hamming centers supported for median only")
        ones = pts.sum(axis=0)
        return exact((ones > len(pts) / 2.0).astype(float))
    if metric == "l2" and objective == "median":
        return _weiszfeld_center(pts, tol, max_iter)
    return _subgradient_center(pts, metric, objective, tol, max_iter)


# ---------------------------------------------------------------------------
# exhaustive clustering


def iter_partitions(n: int, max_blocks: int) -> Iterator[list[int]]:
    """All partitions of range(n) into at most max_blocks nonempty blocks.

    Yields restricted growth strings in lexicographic order, which makes
    first-found minima well defined.
    """
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i: int, nb: int):
        if i == n:
            yield list(rgs)
            return
        top = min(nb + 1, max_blocks)
        for b in range(top):
            rgs[i] = b
            yield from rec(i + 1, max(nb, b + 1))

    yield from rec(1, 1)


def _rgs_blocks(rgs: Sequence[int]) -> list[list[int]]:
    nb = max(rgs) + 1 if rgs else 0
    blocks: list[list[int]] = [[] for _ in range(nb)]
    for i, b in enumerate(rgs):
        blocks[b].append(i)
    return blocks


def brute_force_cluster(
    instance,
    k: int,
    objective: str,
    mode: str = "continuous",
    tol: float = 1e-7,
    partition_cap: int = DEFAULT_PARTITION_CAP,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> tuple[Clustering, float]:
    """Exact optimum by exhaustive enumeration, for oracle use.

    continuous mode enumerates partitions into at most k blocks and solves
    each block's center problem (minsum ignores centers); datapoints mode
    enumerates k-subsets of the input as centers.  Per-subset costs are
    memoized across partitions.  Ties break to the first optimum in
    enumeration order (lexicographic growth strings, lexicographic
    subsets).  Caps guard the two enumerations; exceeding one raises
    CapExceeded.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if mode not in ("continuous", "datapoints"):
        raise ValueError(f"unknown mode {mode!r}")
    is_points = isinstance(instance, PointSet)
    if not is_points and not isinstance(instance, FiniteMetric):
        raise ValueError("instance must be a PointSet or FiniteMetric")
    n = len(instance)
    if k < 1:
        raise ValueError("k must be at least 1")

    if mode == "continuous":
        if n > partition_cap:
            raise CapExceeded(f"n={n} exceeds partition cap {partition_cap}")
        if objective == "minsum":
            dmat = instance.dist if not is_points else pairwise_distances(instance)

            def block_cost(key: tuple[int, ...]) -> float:
                sub = dmat[np.ix_(key, key)]
                return float(sub.sum()) / 2.0

        elif is_points:

            def block_cost(key: tuple[int, ...]) -> float:
                res = optimal_center(
                    instance.points[list(key)], instance.metric, objective, tol=tol
                )
                return res.cost

        else:
            raise ValueError("continuous centers need a PointSet instance")

        memo: dict[tuple[int, ...], float] = {}

        def cost_of(key: tuple[int, ...]) -> float:
            if key not in memo:
                memo[key] = block_cost(key)
            return memo[key]

        best_cost = math.inf
        best_rgs: Optional[list[int]] = None
        for rgs in iter_partitions(n, k):
            total = 0.0
            ok = True
            for block in _rgs_blocks(rgs):
                total += cost_of(tuple(block))
                if total >= best_cost:
                    ok = False
                    break
            if ok and total < best_cost:
                best_cost = total
                best_rgs = rgs
        assert best_rgs is not None
        assignment = np.array(best_rgs, dtype=int)
        centers = None
        if objective != "minsum" and is_points:
            blocks = _rgs_blocks(best_rgs)
            cs = np.zeros((k, instance.dim))
            for b, block in enumerate(blocks):
                cs[b] = optimal_center(
                    instance.points[block], instance.metric, objective, tol=tol
                ).center
            # unused cluster slots repeat the first center
            for b in range(len(blocks), k):
                cs[b] = cs[0]
            centers = cs
        return Clustering(k=k, assignment=assignment, centers=centers), best_cost

    # datapoints mode
    if objective == "minsum":
        raise ValueError("minsum has no center-based datapoints mode")
    if n > tuple_cap:
        raise CapExceeded(f"n={n} exceeds tuple cap {tuple_cap}")
    if k > n:
        raise ValueError("datapoints mode needs k <= n")
    dmat = pairwise_distances(instance) if is_points else instance.dist.copy()
    if objective == "means":
        if is_points and instance.metric == "l2sq":
            pass
        else:
            dmat = dmat * dmat
    best_cost = math.inf
    best_combo: Optional[tuple[int, ...]] = None
    for combo in itertools.combinations(range(n), k):
        cost = float(dmat[:, combo].min(axis=1).sum())
        if cost < best_cost:
            best_cost = cost
            best_combo = combo
    assert best_combo is not None
    assignment = dmat[:, best_combo].argmin(axis=1)
    centers = instance.points[list(best_combo)] if is_points else None
    clustering = Clustering(
        k=k, assignment=assignment, centers=centers, center_indices=best_combo
    )
    return clustering, best_cost


def frechet_embed(fm: FiniteMetric) -> PointSet:
    """Isometric embedding of a finite metric into l-infinity.

    Point i maps to its row of distances (d(i, 0), ..., d(i, n-1)); the
    max-coordinate distance between two rows reproduces d(i, j) exactly.
    """
    d = fm.dist
    return PointSet(dim=d.shape[0], points=d.copy(), metric="linf")
