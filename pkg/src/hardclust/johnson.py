"""Indicator-vector gadgets, rounding facts, and sparse-hypergraph checks.

Subsets of a universe embed as 0/1 indicator vectors; symmetric
difference then matches squared Euclidean and l1 distance exactly, and
any real center rounds to a binary one while losing at most a constant
factor.  The lemma checkers certify the counting step used to bound how
many hyperedges a cheap fractional assignment can touch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .coverage import SetSystem
from .metrics import CapExceeded, PointSet

JOHNSON_CAP = 10**5


@dataclass
class JohnsonInstance:
    """All z-subsets of [0, n), listed in lexicographic order."""

    n: int
    z: int
    sets: list[tuple[int, ...]]


def cov_johnson(n: int, z: int, cap: int = JOHNSON_CAP) -> JohnsonInstance:
    if not 0 < z <= n:
        raise ValueError("need 0 < z <= n")
    if math.comb(n, z) > cap:
        raise CapExceeded(f"C({n},{z}) exceeds cap {cap}")
    return JohnsonInstance(
        n=n, z=z, sets=[tuple(c) for c in itertools.combinations(range(n), z)]
    )


def indicator_embed(
    sets: Sequence[Sequence[int]], n: int, metric: str = "l2"
) -> PointSet:
    """Embed sets as 0/1 indicator vectors in R^n.

    For indicator vectors, squared l2 distance and l1 distance both equal
    the symmetric difference size.
    """
    pts = np.zeros((len(sets), n))
    for i, s in enumerate(sets):
        for v in s:
            v = int(v)
            if not 0 <= v < n:
                raise ValueError("set element out of range")
            pts[i, v] = 1.0
    return PointSet(dim=n, points=pts, metric=metric)


@dataclass
class RoundingFact:
    """Distances from one indicator vector to a center and its rounding."""

    sym_diff: int
    l2sq_to_center: float
    l1_to_center: float
    l2sq_ok: bool
    l1_ok: bool


def round_center(
    center, sets: Optional[Sequence[Sequence[int]]] = None, n: Optional[int] = None
) -> tuple[np.ndarray, list[RoundingFact]]:
    """Round a real center to 0/1 coordinates (threshold 1/2).

    For each supplied set S with rounded set S', verifies the rounding
    inequalities || tau(S) - c ||_2^2 >= |S delta S'| / 4 and
    || tau(S) - c ||_1 >= |S delta S'| / 2: every coordinate where S and
    S' disagree already costs the center at least 1/2 in l1 (1/4 in
    squared l2).
    """
    c = np.asarray(center, dtype=float)
    if c.ndim != 1:
        raise ValueError("center must be a vector")
    rounded = (c >= 0.5).astype(float)
    facts: list[RoundingFact] = []
    if sets is not None:
        dim = len(c) if n is None else n
        pts = indicator_embed(sets, dim).points
        s_prime = set(np.flatnonzero(rounded == 1.0).tolist())
        for i, s in enumerate(sets):
            sd = len(set(int(v) for v in s) ^ s_prime)
            l2sq = float(((pts[i] - c) ** 2).sum())
            l1 = float(np.abs(pts[i] - c).sum())
            facts.append(
                RoundingFact(
                    sym_diff=sd,
                    l2sq_to_center=l2sq,
                    l1_to_center=l1,
                    l2sq_ok=l2sq >= sd / 4.0 - 1e-12,
                    l1_ok=l1 >= sd / 2.0 - 1e-12,
                )
            )
    return rounded, facts


@dataclass
class WeightedHypergraphAssignment:
    """Uniform hypergraph with fractional vertex weights in [0, 1/2]."""

    hypergraph: SetSystem
    x: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        if self.hypergraph.uniformity() is None:
            raise ValueError("hypergraph must be uniform")
        if len(self.x) != self.hypergraph.n:
            raise ValueError("one weight per vertex required")
        if (self.x < 0).any() or (self.x > 0.5 + 1e-12).any():
            raise ValueError("weights must lie in [0, 1/2]")


@dataclass
class LemmaCheckResult:
    r: int
    norm: str
    y_values: np.ndarray
    premise_threshold: float
    premise_all: bool
    edge_bound: float
    bound_holds: Optional[bool]


def hypergraph_lemma_check(
    assignment: WeightedHypergraphAssignment, eps: float, norm: str
) -> LemmaCheckResult:
    """Check the cheap-assignment edge-count bound on one instance.

    For each hyperedge e, y(e) sums (1 - x_v)^p over v in e and x_v^p
    over v outside e, with p = 2 for l2 and p = 1 for l1.  If every edge
    satisfies y(e) <= 1 + q(r - 1) - eps (q = 1/4 for l2, 1/2 for l1),
    the number of hyperedges cannot exceed (8r/eps^2 + r)^r for l2 or
    (2r/eps + r)^r for l1.  bound_holds is None when the premise fails.
    """
    if norm not in ("l1", "l2"):
        raise ValueError("norm must be l1 or l2")
    if eps <= 0:
        raise ValueError("eps must be positive")
    hg = assignment.hypergraph
    r = hg.uniformity()
    assert r is not None
    x = assignment.x
    p = 2 if norm == "l2" else 1
    q = 0.25 if norm == "l2" else 0.5
    total = float((x**p).sum())
    ys = []
    for s in hg.sets:
        inside = np.array(s, dtype=int)
        y = float(((1.0 - x[inside]) ** p).sum()) + total - float(
            (x[inside] ** p).sum()
        )
        ys.append(y)
    y_values = np.array(ys)
    threshold = 1.0 + q * (r - 1) - eps
    premise_all = bool(len(ys) == 0 or (y_values <= threshold + 1e-12).all())
    if norm == "l2":
        edge_bound = float(8.0 * r / eps**2 + r) ** r
    else:
        edge_bound = float(2.0 * r / eps + r) ** r
    bound_holds = (len(hg.sets) <= edge_bound) if premise_all else None
    return LemmaCheckResult(
        r=r,
        norm=norm,
        y_values=y_values,
        premise_threshold=threshold,
        premise_all=premise_all,
        edge_bound=edge_bound,
        bound_holds=bound_holds,
    )


def gap_constants() -> dict[str, float]:
    """Inapproximability thresholds built from the gadgets, to full float
    precision.  The first four are the headline constants; the last two
    are the weaker prior continuous bounds they improve on."""
    e = math.e
    return {
        "l2_median": 1.0 - 1.0 / e + math.sqrt(1.25) / e,
        "l1_means": 1.0 + 1.25 / e,
        "discrete_median": 1.0 + 2.0 / e,
        "discrete_means": 1.0 + 8.0 / e,
        "prior_continuous_median": 1.0 + 1.0 / e,
        "prior_continuous_means": 1.0 + 3.0 / e,
    }
