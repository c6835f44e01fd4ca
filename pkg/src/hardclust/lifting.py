"""Girth lifting of uniform hypergraphs.

The lift replaces each vertex with B copies and each hyperedge with
ell = a*B copies, wiring copies through balanced random tuples so that
every lifted vertex keeps degree a * deg(v).  Short cycles of the
element-set incidence graph are then deleted greedily until its girth
reaches the target t, which makes small vertex neighborhoods tree-like.
Vertex solutions transfer: S goes to S x [B], preserving the fraction of
hyperedges hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .coverage import (
    SetSystem,
    brute_force_max_coverage,
    dual,
    incidence_girth,
    shortest_incidence_cycle,
)
from .metrics import CapExceeded

VERTEX_CAP = 5000
HYPEREDGE_CAP = 20000


@dataclass
class LiftParams:
    """B copies per vertex, ell = a*B copies per hyperedge, girth target t.

    t must be even and at least 4 (incidence graphs are bipartite, so all
    cycle lengths are even).
    """

    B: int
    a: int
    t: int
    seed: int

    def __post_init__(self):
        if self.B < 1 or self.a < 1:
            raise ValueError("B and a must be positive")
        if self.t < 4 or self.t % 2 != 0:
            raise ValueError("t must be even and at least 4")

    @property
    def ell(self) -> int:
        return self.a * self.B


@dataclass
class LiftReport:
    lifted: SetSystem
    deleted: int
    girth_achieved: bool
    max_degree: int
    expected_cycle_bound: float
    deletion_budget: float
    params: LiftParams
    pre_deletion_degrees_ok: bool


def balanced_tuple(B: int, ell: int, rng: np.random.Generator) -> np.ndarray:
    """Random tuple of length ell over [0, B) with each value exactly
    ell / B times; requires B | ell."""
    if ell % B != 0:
        raise ValueError("ell must be a multiple of B")
    arr = np.repeat(np.arange(B), ell // B)
    rng.shuffle(arr)
    return arr


def expected_cycle_bound(
    n: int, d: int, r: int, t: int, a: int, B: Optional[int] = None
) -> float:
    """First-moment bound on incidence cycles of length up to t.

    Each of at most n * (d*r)^t closed walks survives the random wiring
    with probability at most (4*ell/B)^t = (4a)^t, so the bound is
    n * (4*a*d*r)^t; B cancels and is accepted only for signature
    symmetry.
    """
    if min(n, d, r, a) < 0 or t < 0:
        raise ValueError("arguments must be nonnegative")
    return float(n) * float(4 * a * d * r) ** t


def lift(
    system: SetSystem,
    params: LiftParams,
    vertex_cap: int = VERTEX_CAP,
    hyperedge_cap: int = HYPEREDGE_CAP,
) -> LiftReport:
    """Lift a uniform hypergraph and delete short incidence cycles.

    Pre-deletion, lifted vertex (v, b) has degree exactly a * deg(v).
    Deletion scans for a shortest incidence cycle of length below t
    (canonical breadth-first order) and removes the highest-index
    hyperedge on it, repeating until none remain; the girth is then at
    least t.  Deterministic given (system, params).
    """
    r = system.uniformity()
    if r is None:
        raise ValueError("lift needs a uniform hypergraph")
    B, a, t = params.B, params.a, params.t
    n_lift = system.n * B
    if n_lift > vertex_cap:
        raise CapExceeded(f"lifted vertex count {n_lift} exceeds cap {vertex_cap}")
    m_lift = len(system.sets) * params.ell
    if m_lift > hyperedge_cap:
        raise CapExceeded(f"lifted hyperedge count {m_lift} exceeds cap {hyperedge_cap}")

    rng = np.random.default_rng(params.seed)
    edges: list[tuple[int, ...]] = []
    for e in system.sets:
        tuples = {v: balanced_tuple(B, params.ell, rng) for v in e}
        for i in range(params.ell):
            edges.append(tuple(sorted(v * B + int(tuples[v][i]) for v in e)))

    pre = SetSystem(n=n_lift, sets=edges)
    deg = pre.degrees()
    want = np.repeat(system.degrees() * a, B)
    degrees_ok = bool((deg == want).all())

    deleted = 0
    current = list(edges)
    while True:
        sys_now = SetSystem(n=n_lift, sets=current)
        found = shortest_incidence_cycle(sys_now, t - 1)
        if found is None:
            break
        _, nodes = found
        hyperedges_on_cycle = [x - n_lift for x in nodes if x >= n_lift]
        current.pop(max(hyperedges_on_cycle))
        deleted += 1

    lifted = SetSystem(n=n_lift, sets=current)
    girth = incidence_girth(lifted, cap=t)
    d_orig = int(system.degrees().max(initial=0))
    return LiftReport(
        lifted=lifted,
        deleted=deleted,
        girth_achieved=girth >= t,
        max_degree=int(lifted.degrees().max(initial=0)),
        expected_cycle_bound=expected_cycle_bound(system.n, d_orig, r, t, a, B),
        deletion_budget=4.0 * expected_cycle_bound(system.n, d_orig, r, t, a, B),
        params=params,
        pre_deletion_degrees_ok=degrees_ok,
    )


def lift_solution(vertices: Sequence[int], B: int) -> list[int]:
    """Blow a vertex set up to all its copies: v maps to {v*B, ..., v*B+B-1}."""
    out = [v * B + b for v in vertices for b in range(B)]
    return sorted(out)


def best_hitting_fraction(system: SetSystem, budget: int, cap: int = 10**6) -> float:
    """Best fraction of hyperedges intersected by a budget-size vertex set.

    Hitting hyperedges with vertices is max coverage on the dual system,
    which is solved by exhaustive enumeration.
    """
    m = len(system.sets)
    if m == 0:
        return 0.0
    budget = min(budget, system.n)
    _, cov = brute_force_max_coverage(dual(system), budget, cap=cap)
    return cov / m


def hitting_fraction(system: SetSystem, vertices: Sequence[int]) -> float:
    """Fraction of hyperedges intersecting the given vertex set."""
    m = len(system.sets)
    if m == 0:
        return 0.0
    chosen = set(int(v) for v in vertices)
    hit = sum(1 for s in system.sets if chosen.intersection(s))
    return hit / m


@dataclass
class TransferReport:
    """Per-seed comparison of hitting power before and after lifting."""

    original_fraction: float
    rows: list[tuple[int, float, int]] = field(default_factory=list)
    # rows: (seed, lifted_fraction, deleted)
    max_abs_diff: float = 0.0


def coverage_transfer_experiment(
    system: SetSystem,
    B: int,
    a: int,
    t: int,
    k: int,
    seeds: Sequence[int],
    cap: int = 10**6,
) -> TransferReport:
    """Compare the best k-vertex hitting fraction on the original against
    the best k*B-vertex fraction on each seeded lift (post-deletion)."""
    orig = best_hitting_fraction(system, k, cap=cap)
    report = TransferReport(original_fraction=orig)
    for seed in seeds:
        rep = lift(system, LiftParams(B=B, a=a, t=t, seed=int(seed)))
        frac = best_hitting_fraction(rep.lifted, k * B, cap=cap)
        report.rows.append((int(seed), frac, rep.deleted))
        report.max_abs_diff = max(report.max_abs_diff, abs(frac - orig))
    return report


def alpha_budget_fractions(
    system: SetSystem,
    k: int,
    alphas: Sequence[float] = (0.5, 1.0, 2.0),
    cap: int = 10**6,
) -> list[tuple[float, int, float]]:
    """Best hitting fractions at scaled budgets floor(alpha * k)."""
    out = []
    for alpha in alphas:
        budget = int(math.floor(alpha * k + 1e-9))
        out.append((float(alpha), budget, best_hitting_fraction(system, budget, cap=cap)))
    return out
