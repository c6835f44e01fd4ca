"""
Girth lifting a small covering instance
=======================================

Takes the complete 3-uniform hypergraph on four vertices, lifts every
vertex to four copies, and deletes short incidence cycles until the
girth target is met.  Vertex covers transfer exactly; sub-covering
budgets are shown for contrast.
"""

import itertools

import hardclust as hc
from hardclust.lifting import LiftParams

base = hc.SetSystem(n=4, sets=list(itertools.combinations(range(4), 3)))
print("base system: all 3-subsets of a 4 element universe")
st = hc.structure_stats(base)
print(f"  m = {len(base.sets)}, max degree = {st.max_element_degree}, "
      f"girth = {st.girth}")

params = LiftParams(B=4, a=4, t=6, seed=0)
rep = hc.lift(base, params)
lifted_stats = hc.structure_stats(rep.lifted, girth_cap=10)
print(f"\nlift with B={params.B}, a={params.a}, girth target t={params.t}:")
print(f"  vertices {base.n} -> {rep.lifted.n}")
print(f"  hyperedges {len(base.sets)} -> {len(rep.lifted.sets)} "
      f"({rep.deleted} deleted)")
print(f"  pre-deletion degrees exact: {rep.pre_deletion_degrees_ok}")
print(f"  girth after deletion: {lifted_stats.girth} (target {params.t})")
print(f"  deletion budget (first-moment bound): {rep.deletion_budget:.3e}")

# A vertex cover of the base stays a perfect hitting set after lifting.
cover = [0, 1]
print(f"\ncover {cover}: hits {hc.hitting_fraction(base, cover):.0%} of the base")
lifted_cover = hc.lift_solution(cover, params.B)
print(f"its {len(lifted_cover)} copies hit "
      f"{hc.hitting_fraction(rep.lifted, lifted_cover):.0%} of the lift")

# Best hitting fractions across seeds, at the covering budget and below.
print("\ntransfer table (10 seeds):")
print("budget  original  lifted range        max |diff|")
for k in (2, 1):
    t = hc.coverage_transfer_experiment(base, B=4, a=4, t=6, k=k, seeds=range(10))
    fracs = [f for _, f, _ in t.rows]
    print(f"  k={k}    {t.original_fraction:.3f}     "
          f"[{min(fracs):.3f}, {max(fracs):.3f}]      {t.max_abs_diff:.3f}")

print("""
At the covering budget (k=2 here) the fractions agree exactly: covering
sets survive deletion untouched.  Below it, deleting roughly two thirds
of the hyperedges concentrates what remains, so lifted fractions drift
upward; that regime is reported but carries no exactness claim.""")
