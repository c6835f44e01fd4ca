"""
Indicator vectors, center rounding, and the edge-count lemma
============================================================

Subsets of a universe embed as 0/1 vectors; distances become symmetric
differences, real centers round to binary ones at bounded cost, and a
counting lemma limits how many hyperedges any cheap fractional
assignment can touch.
"""

import numpy as np

import hardclust as hc

# All 3-subsets of a 6 element universe, embedded as indicator vectors.
inst = hc.cov_johnson(6, 3)
ps = hc.indicator_embed(inst.sets, inst.n)
print(f"{len(inst.sets)} sets of size {inst.z} over {inst.n} elements")

a, b = inst.sets[0], inst.sets[-1]
sd = len(set(a) ^ set(b))
print(f"\nsets {a} and {b}: symmetric difference {sd}")
print(f"  squared l2 distance: {hc.distance(ps.points[0], ps.points[-1], 'l2sq')}")
print(f"  l1 distance:         {hc.distance(ps.points[0], ps.points[-1], 'l1')}")

# A fractional center rounds coordinate-wise at threshold 1/2.  Each
# coordinate where the rounding disagrees with a set already costs the
# real center 1/2 in l1 (1/4 squared), which is the whole rounding
# argument in one inequality.
center = np.array([0.8, 0.6, 0.4, 0.45, 0.2, 0.1])
rounded, facts = hc.round_center(center, sets=inst.sets[:5], n=inst.n)
print(f"\ncenter  {center}")
print(f"rounds to {rounded}")
print("set        sym diff   l2sq >= sd/4   l1 >= sd/2")
for s, f in zip(inst.sets[:5], facts):
    print(f"{str(s):<12} {f.sym_diff:<8} {f.l2sq_to_center:>6.3f} ({f.l2sq_ok})"
          f"   {f.l1_to_center:>6.3f} ({f.l1_ok})")

# The lemma: if every hyperedge is cheap for a fractional assignment,
# there cannot be many hyperedges at all.
# A concentrated assignment on a star system keeps every edge cheap, so
# the squared-norm premise holds and the edge count is certified.
stars = hc.SetSystem(n=4, sets=[(0,), (1,), (2,), (3,)])
concentrated = hc.WeightedHypergraphAssignment(
    hypergraph=stars, x=np.full(4, 0.25)
)
res = hc.hypergraph_lemma_check(concentrated, 0.2, "l2")
print("\nstar system, x = 0.25 everywhere, l2:")
print(f"  y values {np.round(res.y_values, 3)}, "
      f"threshold {res.premise_threshold:.3f}, premise: {res.premise_all}")
print(f"  edge bound {res.edge_bound:.0f} vs actual {len(stars.sets)}: "
      f"holds = {res.bound_holds}")

# Spreading the same total mass over a larger random system makes every
# edge expensive.  The premise fails, and the lemma claims nothing; that
# is the contrapositive in action, since a system this spread out could
# not stay cheap anyway.
hg = hc.random_uniform_system(8, 5, 2, np.random.default_rng(1))
spread = hc.WeightedHypergraphAssignment(hypergraph=hg, x=np.full(8, 0.5))
for norm in ("l2", "l1"):
    res = hc.hypergraph_lemma_check(spread, 0.2, norm)
    print(f"\nrandom system, x = 0.5 everywhere, {norm}: "
          f"y values {np.round(res.y_values, 3)}")
    print(f"  premise threshold {res.premise_threshold:.3f}, "
          f"all below: {res.premise_all}")
    if res.premise_all:
        print(f"  edge bound {res.edge_bound:.1f} vs actual {len(hg.sets)}: "
              f"holds = {res.bound_holds}")

# The headline inapproximability constants these gadgets certify.
print("\ngap constants:")
for name, value in hc.gap_constants().items():
    print(f"  {name:<26} {value:.12f}")
