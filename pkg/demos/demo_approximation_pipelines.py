"""
From exact solves to candidate grids and coresets
=================================================

One random instance, four algorithms: exact partition enumeration,
data-point enumeration, the dyadic candidate grid, and the ring-sampled
coreset.  Every approximate cost is compared against the exact optimum.
"""

import numpy as np

import hardclust as hc

rng = np.random.default_rng(2024)
points = rng.uniform(-2.0, 2.0, size=(8, 2))
ps = hc.PointSet(dim=2, points=points, metric="linf")
k = 2

print("instance: 8 points in the plane, max-norm distances, k = 2")
print()
print(f"{'algorithm':<22} {'median':>10} {'ratio':>7}   {'means':>10} {'ratio':>7}")

rows = {}
for objective in ("median", "means"):
    _, opt = hc.brute_force_cluster(ps, k, objective, mode="continuous")
    _, two = hc.two_approx_enumerate(ps, k, objective)
    net = hc.pipeline_one_plus_eps(ps, k, 0.5, objective)
    core = hc.pipeline_below2(ps, k, objective, s=3, seed=7)
    rows.setdefault("exact enumeration", []).extend([opt, 1.0])
    rows.setdefault("data-point centers", []).extend([two, two / opt])
    rows.setdefault("candidate grid", []).extend([net.cost, net.cost / opt])
    rows.setdefault("coreset (s=3)", []).extend([core.cost, core.cost / opt])

for name, vals in rows.items():
    med, medr, mea, mear = vals
    print(f"{name:<22} {med:>10.4f} {medr:>7.3f}   {mea:>10.4f} {mear:>7.3f}")

print("""
Guarantees at work: data-point centers stay within 2x (median) or 4x
(means) of the optimum, and the candidate grid within 1 + eps = 1.5.
""")

# Peek inside the candidate construction.
cands = hc.candidate_center_set(ps, k, 0.5, "median")
print(f"candidate grid detail: {len(cands)} candidates, "
      f"{len(cands.radii)} dyadic radii")
print(f"  radii span [{cands.radii[0]:.4f}, {cands.radii[-1]:.4f}], "
      f"gamma = {cands.gamma:.4f}")

# And inside the coreset: weights always total the input size.
cs = hc.coreset_build(ps, k, "median", s=3, seed=7)
print(f"coreset detail: {len(cs.point_indices)} points, "
      f"weights sum to {cs.weights.sum():.1f} (input size {len(ps)})")
