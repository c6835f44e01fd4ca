"""Minsum clustering over two-valued metrics, and its analytic gap constants.

A set system turns into a {1, 2}-metric: elements sharing a set sit at
distance 1, all other pairs at distance 2.  A cluster of n' elements then
costs 2 * C(n', 2) minus the number of its distance-1 pairs, and when the
induced incidence graph is acyclic that saving is capped by a tree-charge
bound.  Optimizing the resulting charged cost over cluster-size profiles
produces the hardness gap ratio; the profile, its defining constant c,
and the final integral are computed here by elementary root finding,
closed forms, and adaptive Simpson quadrature, each cross-checking the
other.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .coverage import SetSystem
from .gadgets import GapReport
from .metrics import Clustering, FiniteMetric, brute_force_cluster, minsum_cost

LOG_9_7 = math.log(9.0 / 7.0)


def build_minsum_instance(system: SetSystem) -> FiniteMetric:
    """Two-valued metric of a set system: 1 if some set contains both
    elements, else 2.  Isolated elements are allowed (all their distances
    are 2) and reported via a warning."""
    n = system.n
    d = 2.0 * (np.ones((n, n)) - np.eye(n))
    for s in system.sets:
        for i, u in enumerate(s):
            for v in s[i + 1 :]:
                d[u, v] = d[v, u] = 1.0
    deg = system.degrees()
    isolated = int((deg == 0).sum())
    if isolated:
        warnings.warn(f"{isolated} isolated element(s); their distances are all 2")
    return FiniteMetric(dist=d, two_valued=True)


def tree_charge_bound(n_prime: float, r_prime: float) -> float:
    """Cap on distance-1 pairs inside a cluster of n' elements whose
    induced sets have size at most r' and form an acyclic incidence
    graph: min(r'n'/2, r'^2/2 + (n'-r')^2/2)."""
    if n_prime < 0 or r_prime < 0 or r_prime > n_prime:
        raise ValueError("need 0 <= r' <= n'")
    return min(
        r_prime * n_prime / 2.0,
        r_prime * r_prime / 2.0 + (n_prime - r_prime) ** 2 / 2.0,
    )


def f_functions(n: float, r: float) -> tuple[float, float, float]:
    """Charged-cost rates f1 = n^2 - rn/2 and f2 = n^2/2 + nr - r^2, and
    their maximum.  They cross at r = n/2, where both equal 3n^2/4."""
    f1 = n * n - r * n / 2.0
    f2 = n * n / 2.0 + n * r - r * r
    return f1, f2, max(f1, f2)


def soundness_residual(c: float) -> float:
    """Residual of the profile-balance equation
    exp(-c) * (ln(9/7) - c) = exp(-1) / 4."""
    return math.exp(-c) * (LOG_9_7 - c) - math.exp(-1.0) / 4.0


def solve_soundness_constant(tol: float = 1e-12) -> float:
    """Root of the balance equation on [0, ln(9/7)] by bisection.

    The residual is positive at 0, negative at ln(9/7), and strictly
    decreasing, so the root is unique.  Equivalently c = ln(9/7) -
    W(9/(28e)); the Lambert function is not used directly.
    """
    lo, hi = 0.0, LOG_9_7
    if soundness_residual(lo) < 0 or soundness_residual(hi) > 0:
        raise RuntimeError("bracket does not straddle the root")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if soundness_residual(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol and abs(soundness_residual(mid)) <= tol:
            break
    return 0.5 * (lo + hi)


@dataclass
class SoundnessProfile:
    """Piecewise cluster-size profile n_alpha on [0, 1].

    With T = exp(-c) and breakpoints d1 = ln(3/2) + c, d2 = ln(7/4) + c:
        [0, c]   : exp(-alpha)
        [c, d1]  : 2T - exp(-alpha)
        [d1, d2] : 2 exp(-alpha)
        [d2, 1]  : T + exp(-alpha) / 4
    The pieces agree at the breakpoints (values T, (4/3) T, (8/7) T).
    """

    c: float

    @property
    def d1(self) -> float:
        return math.log(1.5) + self.c

    @property
    def d2(self) -> float:
        return math.log(1.75) + self.c

    @property
    def breakpoints(self) -> tuple[float, float, float]:
        return (self.c, self.d1, self.d2)

    def value(self, alpha):
        a = np.asarray(alpha, dtype=float)
        if (a < -1e-12).any() or (a > 1 + 1e-12).any():
            raise ValueError("alpha must lie in [0, 1]")
        t = math.exp(-self.c)
        e = np.exp(-a)
        out = np.where(
            a <= self.c,
            e,
            np.where(a <= self.d1, 2 * t - e, np.where(a <= self.d2, 2 * e, t + e / 4.0)),
        )
        return float(out) if np.isscalar(alpha) else out

    def mass_closed_form(self) -> float:
        """Integral of the profile over [0, 1]; collapses to
        1 - exp(-1)/4 + exp(-c) * (ln(9/7) - c)."""
        return 1.0 - math.exp(-1.0) / 4.0 + math.exp(-self.c) * (LOG_9_7 - self.c)


def soundness_profile(c: Optional[float] = None) -> SoundnessProfile:
    return SoundnessProfile(c=solve_soundness_constant() if c is None else float(c))


def adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-9
) -> float:
    """Adaptive Simpson quadrature with Richardson acceptance."""

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def rec(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        lm = 0.5 * (x0 + xm)
        rm = 0.5 * (xm + x2)
        fl, fr = f(lm), f(rm)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return rec(x0, xm, f0, fl, f1, left, eps / 2.0, depth - 1) + rec(
            xm, x2, f1, fr, f2, right, eps / 2.0, depth - 1
        )

    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 50)


def _charged_integrand(profile: SoundnessProfile) -> Callable[[float], float]:
    d2 = profile.d2

    def g(alpha: float) -> float:
        e = math.exp(-alpha)
        n = profile.value(alpha)
        f1, f2, _ = f_functions(n, e)
        return f2 if alpha <= d2 else f1

    return g


def _integral_closed_form(profile: SoundnessProfile) -> float:
    """Piecewise antiderivatives of the charged integrand.

    With E = exp(-alpha) and T = exp(-c) the integrand reduces to E^2/2
    on [0, c], 2T^2 - 1.5 E^2 on [c, d1], 3E^2 on [d1, d2], and
    T^2 - E^2/16 on [d2, 1]; each piece integrates in closed form via
    the antiderivative of E^2 = exp(-2 alpha).
    """
    c, d1, d2 = profile.breakpoints
    t2 = math.exp(-2.0 * profile.c)

    def e2(x):
        return math.exp(-2.0 * x)

    part1 = (e2(0.0) - e2(c)) / 4.0
    part2 = 2.0 * t2 * (d1 - c) + 0.75 * (e2(d1) - e2(c))
    part3 = 1.5 * (e2(d1) - e2(d2))
    part4 = t2 * (1.0 - d2) - (e2(d2) - e2(1.0)) / 32.0
    return part1 + part2 + part3 + part4


def soundness_integral(
    c: Optional[float] = None, tol: float = 1e-9
) -> tuple[float, float]:
    """Charged-cost integral of the profile and the resulting gap ratio.

    The integral is sum of f2(n_alpha, exp(-alpha)) over [0, d2] and
    f1(n_alpha, exp(-alpha)) over [d2, 1].  It is evaluated both by
    piecewise closed forms and by adaptive Simpson quadrature on each
    smooth piece; a disagreement beyond 100 * tol raises.  The gap ratio
    is integral / 0.5, the charged cost relative to the fully
    partitionable baseline.
    """
    profile = soundness_profile(c)
    closed = _integral_closed_form(profile)
    g = _charged_integrand(profile)
    knots = [0.0, *profile.breakpoints, 1.0]
    quad = sum(
        adaptive_simpson(g, x0, x1, tol / 4.0) for x0, x1 in zip(knots, knots[1:])
    )
    if abs(closed - quad) > 100.0 * tol:
        raise RuntimeError(
            f"quadrature {quad!r} disagrees with closed form {closed!r}"
        )
    return closed, closed / 0.5


@dataclass
class MinsumConstants:
    """All derived constants of the minsum gap construction."""

    c: float
    d1: float
    d2: float
    threshold: float
    mass: float
    integral: float
    gap_ratio: float


def minsum_constants(tol: float = 1e-12) -> MinsumConstants:
    c = solve_soundness_constant(tol)
    profile = soundness_profile(c)
    integral, ratio = soundness_integral(c)
    return MinsumConstants(
        c=c,
        d1=profile.d1,
        d2=profile.d2,
        threshold=2.0 * math.exp(-c),
        mass=profile.mass_closed_form(),
        integral=integral,
        gap_ratio=ratio,
    )


# ---------------------------------------------------------------------------
# desk-scale experiments


def cluster_charge_bound(
    system: SetSystem, cluster: Sequence[int]
) -> tuple[float, bool]:
    """Tree-charge lower bound on one cluster's minsum cost.

    Returns (bound, acyclic): bound = max(2 C(n', 2) - tree_charge, 0)
    with r' the largest induced set trace of size at least 2; acyclic
    reports whether the induced element-set incidence graph is a forest,
    which is the regime where the bound is certified.
    """
    members = sorted(set(int(v) for v in cluster))
    pos = {v: i for i, v in enumerate(members)}
    n_prime = len(members)
    traces = []
    for s in system.sets:
        tr = [v for v in s if v in pos]
        if len(tr) >= 2:
            traces.append(tr)
    r_prime = max((len(tr) for tr in traces), default=0)

    # union-find over elements + trace nodes to detect incidence cycles
    parent = list(range(n_prime + len(traces)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    acyclic = True
    for j, tr in enumerate(traces):
        for v in tr:
            a, b = find(pos[v]), find(n_prime + j)
            if a == b:
                acyclic = False
            else:
                parent[a] = b

    pairs = n_prime * (n_prime - 1)  # 2 * C(n', 2)
    bound = max(pairs - tree_charge_bound(n_prime, r_prime), 0.0)
    return bound, acyclic


def minsum_gap_experiment(
    system: SetSystem,
    k: int,
    certificate: Optional[Sequence[Sequence[int]]] = None,
) -> GapReport:
    """Exact minsum optimum of a set-system metric vs a certificate.

    certificate, when given, is a partition of the elements whose cost
    upper bounds the completeness side; without one the optimum itself is
    used (ratio 1).  The soundness side is the exact optimum from
    partition enumeration.  details carries the per-cluster tree-charge
    audit of the optimal partition.
    """
    metric = build_minsum_instance(system)
    clustering, opt = brute_force_cluster(metric, k, "minsum", mode="continuous")

    if certificate is not None:
        seen: set[int] = set()
        assignment = np.zeros(system.n, dtype=int)
        for i, part in enumerate(certificate):
            for v in part:
                v = int(v)
                if v in seen:
                    raise ValueError("certificate parts must be disjoint")
                seen.add(v)
                assignment[v] = i
        if len(seen) != system.n or len(certificate) > k:
            raise ValueError("certificate must partition the universe into <= k parts")
        ub = minsum_cost(metric, Clustering(k=k, assignment=assignment))
    else:
        ub = opt

    audit = []
    for idx in clustering.clusters():
        if len(idx) == 0:
            continue
        bound, acyclic = cluster_charge_bound(system, idx.tolist())
        sub = metric.dist[np.ix_(idx, idx)]
        audit.append(
            {
                "cluster": idx.tolist(),
                "cost": float(sub.sum()) / 2.0,
                "charge_bound": bound,
                "acyclic": acyclic,
            }
        )
    ratio = opt / ub if ub > 0 else 1.0
    return GapReport(
        completeness_ub=ub,
        soundness_lb=opt,
        ratio=ratio,
        certificate=certificate,
        details={"clusters": audit},
    )
