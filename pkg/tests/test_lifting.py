"""Girth lifting: wiring, degree preservation, deletion, transfer."""

import itertools
import math
from collections import Counter

import numpy as np
import pytest

import hardclust as hc
from hardclust.lifting import LiftParams, balanced_tuple, expected_cycle_bound


def k4_triples():
    """Complete 3-uniform hypergraph on four vertices."""
    return hc.SetSystem(n=4, sets=list(itertools.combinations(range(4), 3)))


def test_lift_params_validation():
    with pytest.raises(ValueError):
        LiftParams(B=0, a=1, t=4, seed=0)
    with pytest.raises(ValueError):
        LiftParams(B=2, a=1, t=5, seed=0)
    with pytest.raises(ValueError):
        LiftParams(B=2, a=1, t=2, seed=0)
    assert LiftParams(B=3, a=2, t=6, seed=1).ell == 6


def test_balanced_tuple_counts():
    rng = np.random.default_rng(0)
    for _ in range(50):
        arr = balanced_tuple(4, 12, rng)
        assert Counter(arr.tolist()) == {0: 3, 1: 3, 2: 3, 3: 3}
    with pytest.raises(ValueError):
        balanced_tuple(4, 10, rng)


def test_expected_cycle_bound_values():
    assert expected_cycle_bound(5, 2, 3, 0, 1) == 5.0
    # n * (4*a*d*r)^t with n=4, d=3, r=3, a=4, t=6
    assert expected_cycle_bound(4, 3, 3, 6, 4) == 4 * (4 * 4 * 3 * 3) ** 6
    assert expected_cycle_bound(4, 3, 3, 6, 4) < expected_cycle_bound(4, 3, 3, 8, 4)
    with pytest.raises(ValueError):
        expected_cycle_bound(-1, 2, 3, 4, 1)


def test_lift_identity_parameters_reproduce_input():
    sys = hc.SetSystem(n=5, sets=[(0, 1), (1, 2), (3, 4)])
    rep = hc.lift(sys, LiftParams(B=1, a=1, t=4, seed=7))
    assert rep.lifted.n == 5
    assert sorted(rep.lifted.sets) == sorted(sys.sets)
    assert rep.deleted == 0
    assert rep.pre_deletion_degrees_ok


def test_lift_shapes_degrees_and_girth():
    sys = hc.SetSystem(n=6, sets=[(0, 1, 2), (2, 3, 4), (0, 4, 5)])
    params = LiftParams(B=8, a=1, t=6, seed=3)
    rep = hc.lift(sys, params)
    assert rep.lifted.n == 48
    assert len(rep.lifted.sets) + rep.deleted == 3 * params.ell
    assert rep.girth_achieved
    assert hc.incidence_girth(rep.lifted, cap=6) >= 6
    # pre-deletion each copy of v has degree a * deg(v); deletion only lowers it
    want = np.repeat(sys.degrees() * params.a, params.B)
    assert (rep.lifted.degrees() <= want).all()
    assert rep.max_degree <= int(want.max())
    assert rep.deletion_budget == 4.0 * rep.expected_cycle_bound


def test_lift_deterministic_in_seed():
    sys = k4_triples()
    p = LiftParams(B=4, a=2, t=6, seed=11)
    r1, r2 = hc.lift(sys, p), hc.lift(sys, p)
    assert r1.lifted.sets == r2.lifted.sets and r1.deleted == r2.deleted
    r3 = hc.lift(sys, LiftParams(B=4, a=2, t=6, seed=12))
    assert r3.lifted.sets != r1.lifted.sets


def test_lift_caps_and_uniformity():
    with pytest.raises(hc.CapExceeded):
        hc.lift(hc.SetSystem(n=600, sets=[(0, 1)]), LiftParams(B=10, a=1, t=4, seed=0))
    mixed = hc.SetSystem(n=4, sets=[(0, 1), (1, 2, 3)])
    with pytest.raises(ValueError):
        hc.lift(mixed, LiftParams(B=2, a=1, t=4, seed=0))


def test_lift_solution_copies():
    assert hc.lift_solution([0, 2], 3) == [0, 1, 2, 6, 7, 8]
    assert hc.lift_solution([], 5) == []


def test_hitting_fraction_and_best():
    sys = hc.SetSystem(n=4, sets=[(0, 1), (2, 3), (0, 2)])
    assert hc.hitting_fraction(sys, [0]) == pytest.approx(2 / 3)
    assert hc.hitting_fraction(sys, [0, 3]) == 1.0
    assert hc.best_hitting_fraction(sys, 1) == pytest.approx(2 / 3)
    assert hc.best_hitting_fraction(sys, 2) == 1.0
    # oracle: exhaustive over vertex subsets
    oracle = max(
        hc.hitting_fraction(sys, pick)
        for pick in itertools.combinations(range(4), 2)
    )
    assert hc.best_hitting_fraction(sys, 2) == oracle


def test_covering_sets_survive_lifting():
    # a vertex cover of the base, blown up to copies, still hits everything
    sys = k4_triples()
    cover = [0, 1]  # every 3-subset of [4] meets {0, 1}
    assert hc.hitting_fraction(sys, cover) == 1.0
    rep = hc.lift(sys, LiftParams(B=4, a=4, t=6, seed=1))
    lifted_pick = hc.lift_solution(cover, 4)
    assert hc.hitting_fraction(rep.lifted, lifted_pick) == 1.0


def test_transfer_experiment_at_covering_budget():
    rep = hc.coverage_transfer_experiment(
        k4_triples(), B=4, a=4, t=6, k=2, seeds=range(3)
    )
    assert rep.original_fraction == 1.0
    assert rep.max_abs_diff == 0.0
    assert all(frac == 1.0 for _, frac, _ in rep.rows)


def test_transfer_experiment_below_covering_budget():
    # sub-covering budgets inflate under heavy deletion; keep a loose band
    rep = hc.coverage_transfer_experiment(
        k4_triples(), B=4, a=4, t=6, k=1, seeds=range(3)
    )
    assert rep.original_fraction == pytest.approx(0.75)
    assert rep.max_abs_diff <= 0.3
    for _, frac, deleted in rep.rows:
        assert rep.original_fraction <= frac <= 1.0
        assert deleted <= 64


def test_alpha_budget_fractions_monotone():
    sys = k4_triples()
    rows = hc.alpha_budget_fractions(sys, k=2, alphas=(0.5, 1.0, 2.0))
    assert [b for _, b, _ in rows] == [1, 2, 4]
    fr = [f for _, _, f in rows]
    assert fr[0] <= fr[1] <= fr[2]
    assert fr[1] == 1.0
