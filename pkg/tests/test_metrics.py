"""Core metric, objective, and exhaustive-solver tests.

Expected values come from independent oracles computed inline: dense grid
searches, closed-form hand values, and exhaustive enumerations that do
not share code with the implementation under test.
"""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hardclust as hc
from hardclust.metrics import iter_partitions


def test_distance_examples():
    p, q = np.array([0.0, 0.0]), np.array([3.0, -4.0])
    assert hc.distance(p, q, "linf") == 4.0
    assert hc.distance(p, q, "l1") == 7.0
    assert hc.distance(p, q, "l2") == 5.0
    assert hc.distance(p, q, "l2sq") == 25.0
    assert hc.distance(np.array([0, 1, 1]), np.array([1, 1, 0]), "hamming") == 2.0
    assert hc.distance(p, p, "l2") == 0.0


def test_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        hc.distance(np.zeros(2), np.zeros(3), "l2")
    with pytest.raises(ValueError):
        hc.distance(np.zeros(2), np.zeros(2), "chebyshev")


@pytest.mark.parametrize("metric", ["linf", "l1", "l2", "l2sq", "hamming"])
def test_pairwise_matches_scalar_distance(metric):
    rng = np.random.default_rng(7)
    pts = rng.uniform(0, 1, size=(8, 3))
    if metric == "hamming":
        pts = (pts > 0.5).astype(float)
    ps = hc.PointSet(dim=3, points=pts, metric=metric)
    d = hc.pairwise_distances(ps)
    for i in range(8):
        for j in range(8):
            assert d[i, j] == pytest.approx(hc.distance(pts[i], pts[j], metric), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.integers(-5, 5), min_size=3, max_size=3),
    st.lists(st.integers(-5, 5), min_size=3, max_size=3),
    st.lists(st.integers(-5, 5), min_size=3, max_size=3),
)
def test_metric_axioms_property(a, b, c):
    for metric in ("linf", "l1", "l2"):
        pa, pb, pc = (np.array(v, dtype=float) for v in (a, b, c))
        dab = hc.distance(pa, pb, metric)
        assert dab == pytest.approx(hc.distance(pb, pa, metric), abs=1e-12)
        assert dab <= hc.distance(pa, pc, metric) + hc.distance(pc, pb, metric) + 1e-9
        assert (dab == 0) == bool((pa == pb).all())


def test_point_set_validation():
    with pytest.raises(ValueError):
        hc.PointSet(dim=2, points=np.array([[0.0, 0.5]]), metric="hamming")
    with pytest.raises(ValueError):
        hc.PointSet(dim=3, points=np.zeros((2, 2)), metric="l2")


def test_finite_metric_validation():
    with pytest.raises(ValueError):
        hc.FiniteMetric(dist=np.array([[0.0, 1.0], [2.0, 0.0]]))
    # triangle violation: d(0,2) = 9 > 1 + 1
    bad = np.array([[0.0, 1.0, 9.0], [1.0, 0.0, 1.0], [9.0, 1.0, 0.0]])
    with pytest.raises(ValueError):
        hc.FiniteMetric(dist=bad)
    with pytest.raises(ValueError):
        hc.FiniteMetric(dist=np.array([[0.0, 3.0], [3.0, 0.0]]), two_valued=True)


def test_objective_cost_single_point_zero():
    ps = hc.PointSet(dim=2, points=np.array([[1.0, 2.0]]), metric="linf")
    cl = hc.Clustering(k=1, assignment=np.array([0]), centers=np.array([[1.0, 2.0]]))
    res = hc.objective_cost(ps, cl, "means")
    assert res.assigned == 0.0 and res.nearest == 0.0


def test_objective_cost_two_points_midpoint_means():
    # 1-d grid oracle: minimize (4 - x)^2 + x^2 over a fine grid
    grid = np.linspace(-1.0, 5.0, 60001)
    oracle = ((4.0 - grid) ** 2 + grid**2).min()
    assert oracle == pytest.approx(8.0, abs=1e-7)
    ps = hc.PointSet(dim=1, points=np.array([[0.0], [4.0]]), metric="linf")
    cl = hc.Clustering(k=1, assignment=np.array([0, 0]), centers=np.array([[2.0]]))
    assert hc.objective_cost(ps, cl, "means").assigned == 8.0


def test_objective_cost_nearest_never_larger():
    rng = np.random.default_rng(3)
    for _ in range(20):
        pts = rng.normal(size=(6, 2))
        ps = hc.PointSet(dim=2, points=pts, metric="l2")
        cl = hc.Clustering(
            k=2,
            assignment=rng.integers(0, 2, size=6),
            centers=rng.normal(size=(2, 2)),
        )
        for obj in ("median", "means"):
            res = hc.objective_cost(ps, cl, obj)
            assert res.nearest <= res.assigned + 1e-12


def test_objective_cost_requires_centers():
    ps = hc.PointSet(dim=1, points=np.array([[0.0]]), metric="l2")
    with pytest.raises(ValueError):
        hc.objective_cost(ps, hc.Clustering(k=1, assignment=np.array([0])), "means")


def test_minsum_cost_examples():
    d = np.array([[0.0, 1, 1], [1, 0, 1], [1, 1, 0]])
    fm = hc.FiniteMetric(dist=d)
    all_one = hc.Clustering(k=1, assignment=np.zeros(3, dtype=int))
    assert hc.minsum_cost(fm, all_one) == 3.0
    singletons = hc.Clustering(k=3, assignment=np.arange(3))
    assert hc.minsum_cost(fm, singletons) == 0.0


def test_kmeans_pairwise_identity_two_points():
    rng = np.random.default_rng(11)
    p, q = rng.normal(size=2), rng.normal(size=2)
    ps = hc.PointSet(dim=2, points=np.stack([p, q]), metric="l2")
    cl = hc.Clustering(k=1, assignment=np.array([0, 0]))
    centroid, pairwise = hc.kmeans_pairwise_identity(ps, cl)
    expect = float(((p - q) ** 2).sum()) / 2.0
    assert centroid == pytest.approx(expect, rel=1e-12)
    assert pairwise == pytest.approx(expect, rel=1e-12)


def test_kmeans_pairwise_identity_random():
    rng = np.random.default_rng(12)
    for _ in range(25):
        pts = rng.normal(size=(10, 3))
        ps = hc.PointSet(dim=3, points=pts, metric="l2")
        cl = hc.Clustering(k=3, assignment=rng.integers(0, 3, size=10))
        if any(len(ix) == 0 for ix in cl.clusters()):
            continue
        a, b = hc.kmeans_pairwise_identity(ps, cl)
        assert a == pytest.approx(b, rel=1e-9)


def test_kmeans_pairwise_identity_empty_cluster_raises():
    ps = hc.PointSet(dim=1, points=np.array([[0.0], [1.0]]), metric="l2")
    cl = hc.Clustering(k=2, assignment=np.array([0, 0]))
    with pytest.raises(ValueError):
        hc.kmeans_pairwise_identity(ps, cl)


# ---------------------------------------------------------------------------
# optimal centers


def test_optimal_center_two_point_linf():
    pts = np.array([[0.0, 1.0], [4.0, 2.0]])
    med = hc.optimal_center(pts, "linf", "median")
    assert med.cost == pytest.approx(4.0, abs=1e-9)
    assert med.converged
    mea = hc.optimal_center(pts, "linf", "means")
    assert mea.cost == pytest.approx(8.0, abs=1e-9)
    assert mea.lower_bound == pytest.approx(8.0, abs=1e-12)


def test_optimal_center_hamming_majority():
    pts = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    res = hc.optimal_center(pts, "hamming", "median")
    # exhaustive oracle over the four binary centers
    best = min(
        sum(hc.distance(p, np.array(c, dtype=float), "hamming") for p in pts)
        for c in itertools.product([0, 1], repeat=2)
    )
    assert best == 2.0
    assert res.cost == best
    assert res.center.tolist() == [0.0, 1.0]


def test_optimal_center_l1_median_grid_oracle():
    rng = np.random.default_rng(5)
    pts = rng.uniform(0, 1, size=(7, 1))
    res = hc.optimal_center(pts, "l1", "median")
    grid = np.linspace(-0.5, 1.5, 40001)
    oracle = float(np.abs(pts - grid[None, :]).sum(axis=0).min())
    # closed form must beat the grid, and stay within grid resolution of it
    assert res.cost <= oracle + 1e-12
    assert res.cost == pytest.approx(oracle, abs=5e-5)


def test_optimal_center_l2_means_centroid():
    rng = np.random.default_rng(6)
    pts = rng.normal(size=(9, 4))
    res = hc.optimal_center(pts, "l2", "means")
    mu = pts.mean(axis=0)
    assert np.allclose(res.center, mu)
    assert res.cost == pytest.approx(float(((pts - mu) ** 2).sum()), rel=1e-12)
    assert res.converged and res.gap == 0.0


def test_optimal_center_l2_median_vs_scipy():
    from scipy.optimize import minimize

    rng = np.random.default_rng(8)
    for _ in range(10):
        pts = rng.normal(size=(rng.integers(2, 8), 3))

        def f(c):
            return np.sqrt(((pts - c) ** 2).sum(axis=1)).sum()

        res = hc.optimal_center(pts, "l2", "median")
        ref = minimize(f, pts.mean(axis=0), method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 5000})
        assert res.cost <= ref.fun + 1e-5
        assert res.cost >= res.lower_bound - 1e-12


def test_optimal_center_linf_vs_scipy():
    from scipy.optimize import minimize

    rng = np.random.default_rng(9)
    for objective in ("median", "means"):
        for _ in range(8):
            pts = rng.uniform(-1, 1, size=(rng.integers(2, 7), 2))

            def f(c):
                per = np.abs(pts - c).max(axis=1)
                return per.sum() if objective == "median" else (per**2).sum()

            res = hc.optimal_center(pts, "linf", objective, max_iter=4000)
            seeds = [pts.mean(axis=0), (pts.min(0) + pts.max(0)) / 2]
            ref = min(
                minimize(f, s, method="Nelder-Mead",
                         options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 5000}).fun
                for s in seeds
            )
            assert res.cost <= ref + 1e-6
            assert res.cost >= res.lower_bound - 1e-12


def test_optimal_center_unsupported():
    pts = np.array([[0.0], [1.0]])
    with pytest.raises(ValueError):
        hc.optimal_center(pts, "hamming", "means")
    with pytest.raises(ValueError):
        hc.optimal_center(pts, "l2sq", "means")
    with pytest.raises(ValueError):
        hc.optimal_center(np.zeros((0, 2)), "l2", "means")


# ---------------------------------------------------------------------------
# partitions and brute force


def test_iter_partitions_counts():
    # Stirling: S(4,1) + S(4,2) = 8; Bell(4) = 15
    assert sum(1 for _ in iter_partitions(4, 2)) == 8
    assert sum(1 for _ in iter_partitions(4, 4)) == 15
    first = next(iter_partitions(4, 2))
    assert first == [0, 0, 0, 0]
    everything = list(iter_partitions(3, 3))
    assert everything[0] == [0, 0, 0] and everything[-1] == [0, 1, 2]
    assert len(everything) == len({tuple(p) for p in everything})


def test_brute_force_k_equals_n_is_zero():
    rng = np.random.default_rng(13)
    pts = rng.normal(size=(5, 2))
    ps = hc.PointSet(dim=2, points=pts, metric="linf")
    for obj in ("median", "means"):
        _, cost = hc.brute_force_cluster(ps, 5, obj, mode="continuous")
        assert cost == pytest.approx(0.0, abs=1e-12)
    fm = hc.FiniteMetric.from_points(ps)
    _, cost = hc.brute_force_cluster(fm, 5, "minsum", mode="continuous")
    assert cost == 0.0


def test_brute_force_minsum_four_point_oracle():
    # {1,2}-metric: 0-1 and 2-3 at distance 1, the rest at 2
    d = np.full((4, 4), 2.0)
    np.fill_diagonal(d, 0.0)
    d[0, 1] = d[1, 0] = 1.0
    d[2, 3] = d[3, 2] = 1.0
    fm = hc.FiniteMetric(dist=d, two_valued=True)
    # oracle: enumerate every partition of 4 items into <= 2 parts by hand
    def cost_of(blocks):
        return sum(
            d[i, j] for b in blocks for i, j in itertools.combinations(b, 2)
        )
    oracle = min(
        cost_of(blocks)
        for blocks in (
            [[0, 1, 2, 3]],
            [[0], [1, 2, 3]], [[1], [0, 2, 3]], [[2], [0, 1, 3]], [[3], [0, 1, 2]],
            [[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]],
        )
    )
    cl, cost = hc.brute_force_cluster(fm, 2, "minsum", mode="continuous")
    assert cost == oracle == 2.0
    assert cl.assignment.tolist() == [0, 0, 1, 1]


def test_brute_force_k1_means_matches_identity():
    rng = np.random.default_rng(14)
    pts = rng.normal(size=(6, 2))
    ps = hc.PointSet(dim=2, points=pts, metric="l2")
    _, cost = hc.brute_force_cluster(ps, 1, "means", mode="continuous")
    centroid_cost, pairwise = hc.kmeans_pairwise_identity(
        ps, hc.Clustering(k=1, assignment=np.zeros(6, dtype=int))
    )
    assert cost == pytest.approx(centroid_cost, rel=1e-12)
    assert cost == pytest.approx(pairwise, rel=1e-9)


def test_brute_force_continuous_at_most_datapoints():
    rng = np.random.default_rng(15)
    for _ in range(5):
        pts = rng.uniform(-1, 1, size=(6, 2))
        ps = hc.PointSet(dim=2, points=pts, metric="linf")
        for obj in ("median", "means"):
            _, cont = hc.brute_force_cluster(ps, 2, obj, mode="continuous")
            _, disc = hc.brute_force_cluster(ps, 2, obj, mode="datapoints")
            assert cont <= disc + 1e-9


def test_brute_force_deterministic_tie_break():
    # two coincident pairs; the first optimum in growth-string order wins
    pts = np.array([[0.0], [0.0], [5.0], [5.0]])
    ps = hc.PointSet(dim=1, points=pts, metric="linf")
    cl1, c1 = hc.brute_force_cluster(ps, 2, "median", mode="continuous")
    cl2, c2 = hc.brute_force_cluster(ps, 2, "median", mode="continuous")
    assert c1 == c2 == 0.0
    assert cl1.assignment.tolist() == cl2.assignment.tolist() == [0, 0, 1, 1]


def test_brute_force_caps_and_errors():
    pts = np.zeros((13, 1))
    ps = hc.PointSet(dim=1, points=pts, metric="l2")
    with pytest.raises(hc.CapExceeded):
        hc.brute_force_cluster(ps, 2, "means", mode="continuous")
    with pytest.raises(hc.CapExceeded):
        hc.brute_force_cluster(
            hc.PointSet(dim=1, points=np.zeros((17, 1)), metric="l2"),
            2, "means", mode="datapoints",
        )
    with pytest.raises(ValueError):
        hc.brute_force_cluster(ps, 2, "minsum", mode="datapoints")
    with pytest.raises(ValueError):
        hc.brute_force_cluster(ps, 0, "means", mode="continuous")


def test_brute_force_datapoints_centers_are_input_points():
    rng = np.random.default_rng(16)
    pts = rng.normal(size=(7, 2))
    ps = hc.PointSet(dim=2, points=pts, metric="l2")
    cl, cost = hc.brute_force_cluster(ps, 2, "median", mode="datapoints")
    assert cl.center_indices is not None and len(cl.center_indices) == 2
    assert np.allclose(cl.centers, pts[list(cl.center_indices)])
    direct = hc.objective_cost(ps, cl, "median")
    assert cost == pytest.approx(direct.nearest, rel=1e-12)


# ---------------------------------------------------------------------------
# frechet embedding


def test_frechet_single_point():
    fm = hc.FiniteMetric(dist=np.zeros((1, 1)))
    ps = hc.frechet_embed(fm)
    assert ps.metric == "linf" and ps.points.tolist() == [[0.0]]


def test_frechet_exact_isometry():
    rng = np.random.default_rng(17)
    for _ in range(10):
        pts = rng.normal(size=(6, 3))
        fm = hc.FiniteMetric.from_points(hc.PointSet(dim=3, points=pts, metric="l2"))
        emb = hc.frechet_embed(fm)
        dd = hc.pairwise_distances(emb)
        assert np.abs(dd - fm.dist).max() <= 1e-12


def test_frechet_preserves_minsum_costs():
    rng = np.random.default_rng(18)
    pts = rng.normal(size=(6, 2))
    fm = hc.FiniteMetric.from_points(hc.PointSet(dim=2, points=pts, metric="l2"))
    emb_fm = hc.FiniteMetric(dist=hc.pairwise_distances(hc.frechet_embed(fm)))
    for _ in range(20):
        cl = hc.Clustering(k=3, assignment=rng.integers(0, 3, size=6))
        assert hc.minsum_cost(fm, cl) == pytest.approx(
            hc.minsum_cost(emb_fm, cl), abs=1e-12
        )
