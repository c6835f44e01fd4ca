"""Approximation algorithms with enumeration-certified guarantees.

Restricting centers to input points costs at most a factor 2 (median) or
4 (means) against the best continuous solution, so exhausting k-subsets
of the data is already a constant-factor algorithm.  Layering dyadic
balls of axis-aligned grids around every data point produces a candidate
set fine enough for a (1 + eps) guarantee in l-infinity, and ring-based
importance sampling around a 2-approximation compresses the data itself
into a weighted coreset.
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
    _point_center_distances,
    brute_force_cluster,
)

PIPELINE_TUPLE_CAP = 5 * 10**7


def two_approx_enumerate(
    instance, k: int, objective: str, tuple_cap: int = 16
) -> tuple[Clustering, float]:
    """Best k input points as centers, by exhaustive enumeration.

    Against the best continuous centers this loses at most a factor 2 for
    median (triangle inequality via the point nearest the true center)
    and 4 for means (the squared version).
    """
    return brute_force_cluster(
        instance, k, objective, mode="datapoints", tuple_cap=tuple_cap
    )


def _pipeline_tuple_cap(n: int, k: int, cap: int = PIPELINE_TUPLE_CAP) -> int:
    """Point cap for the base enumeration inside the pipelines.

    The pipelines budget by combination count, not point count, so large
    inputs with small k stay enumerable while C(n, k) is still guarded.
    """
    if math.comb(n, k) > cap:
        raise CapExceeded(f"C({n},{k}) exceeds pipeline cap {cap}")
    return n


@dataclass
class CandidateCenterSet:
    """Finite center candidates guaranteed to contain a near-optimal tuple."""

    points: np.ndarray
    gamma: float
    eps: float
    radii: list[float]
    objective: str

    def __len__(self) -> int:
        return self.points.shape[0]


def candidate_center_set(
    ps: PointSet, k: int, eps: float, objective: str = "median"
) -> CandidateCenterSet:
    """Dyadic grids around every data point, plus the points themselves.

    gamma is the data-point enumeration cost.  Around each point, for
    each dyadic radius R = 2^i with eps*scale/n <= 2^i <= 2*scale (scale
    is gamma for median and sqrt(gamma) for means, matching distance
    units), an axis-aligned grid of spacing 2*eps*R clipped to the ball
    B(p, R) is added, so every point of the ball is within eps*R of the
    grid in l-infinity.
    """
    if ps.metric != "linf":
        raise ValueError("candidate grids are built for l-infinity instances")
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    _, gamma = two_approx_enumerate(
        ps, k, objective, tuple_cap=_pipeline_tuple_cap(len(ps), k)
    )
    n = len(ps)
    scale = gamma if objective == "median" else math.sqrt(gamma)
    pieces = [ps.points]
    radii: list[float] = []
    if scale > 0:
        lo = eps * scale / n
        hi = 2.0 * scale
        i = math.floor(math.log2(lo))
        if 2.0**i < lo:
            i += 1
        per_axis = math.ceil(1.0 / eps) + 1
        while 2.0**i <= hi:
            radii.append(2.0**i)
            i += 1
        for p in ps.points:
            for r in radii:
                axes = [
                    np.minimum(p[j] - r + 2.0 * eps * r * np.arange(per_axis), p[j] + r)
                    for j in range(ps.dim)
                ]
                mesh = np.meshgrid(*axes, indexing="ij")
                grid = np.stack([m.ravel() for m in mesh], axis=1)
                pieces.append(grid)
    cands = np.unique(np.vstack(pieces), axis=0)
    return CandidateCenterSet(
        points=cands, gamma=gamma, eps=eps, radii=radii, objective=objective
    )


@dataclass
class Coreset:
    """Weighted subset of the input standing in for the full point set."""

    point_indices: np.ndarray
    weights: np.ndarray
    base_center_indices: tuple[int, ...]
    gamma: float
    rings_per_center: int


def coreset_build(
    ps: PointSet,
    k: int,
    objective: str,
    s: int = 40,
    seed: int = 0,
    eps: float = 0.5,
) -> Coreset:
    """Ring sampling around a data-point 2-approximation.

    Points are grouped by their nearest 2-approximation center and by
    dyadic distance ring (powers of two spanning [eps*scale/n, 2*scale]);
    each group keeps at most s uniformly sampled members, reweighted by
    group size over s so the weights add up to the number of points.
    """
    base, gamma = two_approx_enumerate(
        ps, k, objective, tuple_cap=_pipeline_tuple_cap(len(ps), k)
    )
    centers = base.centers
    assert centers is not None
    d = _point_center_distances(ps, centers)
    nearest = d.argmin(axis=1)
    nd = d[np.arange(len(ps)), nearest]
    scale = gamma if objective == "median" else math.sqrt(gamma)
    n = len(ps)
    if scale > 0:
        r_min = eps * scale / n
        n_rings = max(1, math.ceil(math.log2((2.0 * scale) / r_min)) + 1)
    else:
        r_min = 0.0
        n_rings = 1

    def ring_of(dist: float) -> int:
        if scale == 0 or dist <= r_min:
            return 0
        return min(n_rings - 1, 1 + math.floor(math.log2(dist / r_min)))

    rng = np.random.default_rng(seed)
    idx_out: list[int] = []
    w_out: list[float] = []
    for ci in range(k):
        for ring in range(n_rings):
            group = [
                i for i in range(n) if nearest[i] == ci and ring_of(float(nd[i])) == ring
            ]
            if not group:
                continue
            if len(group) <= s:
                idx_out.extend(group)
                w_out.extend([1.0] * len(group))
            else:
                pick = rng.choice(len(group), size=s, replace=False)
                pick.sort()
                idx_out.extend(group[j] for j in pick)
                w_out.extend([len(group) / s] * s)
    return Coreset(
        point_indices=np.array(idx_out, dtype=int),
        weights=np.array(w_out, dtype=float),
        base_center_indices=base.center_indices or (),
        gamma=gamma,
        rings_per_center=n_rings,
    )


def weighted_cost(
    points: np.ndarray,
    weights: np.ndarray,
    centers: np.ndarray,
    metric: str,
    objective: str,
) -> float:
    """Weighted nearest-center cost of a point array."""
    ps = PointSet(dim=points.shape[1], points=points, metric=metric)
    d = _point_center_distances(ps, centers)
    if objective == "means" and metric != "l2sq":
        d = d * d
    return float((weights * d.min(axis=1)).sum())


def _best_tuple(
    ps: PointSet,
    candidates: np.ndarray,
    k: int,
    objective: str,
    cap: int = PIPELINE_TUPLE_CAP,
) -> tuple[tuple[int, ...], float]:
    """Exhaustive best k-tuple of candidate centers by true data cost."""
    c = candidates.shape[0]
    if k > c:
        raise ValueError("fewer candidates than clusters")
    if math.comb(c, k) > cap:
        raise CapExceeded(f"C({c},{k}) exceeds pipeline cap {cap}")
    d = _point_center_distances(ps, candidates)
    if objective == "means":
        d = d * d
    if k == 1:
        sums = d.sum(axis=0)
        j = int(sums.argmin())
        return (j,), float(sums[j])
    if k == 2:
        best = math.inf
        pick = (0, 1)
        for a in range(c - 1):
            rest = np.minimum(d[:, a : a + 1], d[:, a + 1 :]).sum(axis=0)
            b = int(rest.argmin())
            if rest[b] < best:
                best = float(rest[b])
                pick = (a, a + 1 + b)
        return pick, best
    best = math.inf
    pick: tuple[int, ...] = tuple(range(k))
    for combo in itertools.combinations(range(c), k):
        cost = float(d[:, combo].min(axis=1).sum())
        if cost < best:
            best = cost
            pick = combo
    return pick, best


@dataclass
class PipelineResult:
    clustering: Clustering
    cost: float
    detail: dict = field(default_factory=dict)


def pipeline_one_plus_eps(
    ps: PointSet, k: int, eps: float, objective: str = "median"
) -> PipelineResult:
    """Candidate-grid pipeline: build the dyadic candidate set, then pick
    the best k candidates by exact evaluation on the full data.  The
    returned cost is the true cost of the chosen centers, within
    (1 + eps) of the continuous optimum for median instances."""
    cands = candidate_center_set(ps, k, eps, objective)
    pick, cost = _best_tuple(ps, cands.points, k, objective)
    centers = cands.points[list(pick)]
    assignment = _point_center_distances(ps, centers).argmin(axis=1)
    return PipelineResult(
        clustering=Clustering(k=k, assignment=assignment, centers=centers),
        cost=cost,
        detail={"candidates": len(cands), "gamma": cands.gamma, "radii": cands.radii},
    )


def pipeline_below2(
    ps: PointSet,
    k: int,
    objective: str = "median",
    s: int = 40,
    seed: int = 0,
) -> PipelineResult:
    """Coreset pipeline: compress to a weighted coreset, enumerate k-tuples
    of coreset points against the weighted cost, and report the chosen
    centers' true cost on the full data."""
    cs = coreset_build(ps, k, objective, s=s, seed=seed)
    sub = ps.points[cs.point_indices]
    best = math.inf
    pick: Optional[tuple[int, ...]] = None
    for combo in itertools.combinations(range(len(sub)), k):
        w = weighted_cost(sub, cs.weights, sub[list(combo)], ps.metric, objective)
        if w < best:
            best = w
            pick = combo
    assert pick is not None
    centers = sub[list(pick)]
    d = _point_center_distances(ps, centers)
    if objective == "means":
        d = d * d
    cost = float(d.min(axis=1).sum())
    assignment = d.argmin(axis=1)
    return PipelineResult(
        clustering=Clustering(k=k, assignment=assignment, centers=centers),
        cost=cost,
        detail={
            "coreset_size": len(cs.point_indices),
            "weighted_cost": best,
            "gamma": cs.gamma,
        },
    )
