"""
Minsum gap constants from scratch
=================================

Walks the analytic pipeline end to end: root-find the profile constant,
inspect the piecewise cluster-size profile, and integrate the charged
cost two independent ways.
"""

import math

import numpy as np

import hardclust as hc
from hardclust.minsum import adaptive_simpson, soundness_residual

# The profile constant c balances exp(-c) * (ln(9/7) - c) against
# exp(-1)/4.  Bisection is enough; the residual is strictly decreasing.
c = hc.solve_soundness_constant()
print(f"constant c          = {c:.15f}")
print(f"residual at c       = {soundness_residual(c):.3e}")

profile = hc.soundness_profile(c)
print(f"breakpoints         = {[round(b, 6) for b in profile.breakpoints]}")

# The profile is continuous: evaluate on a grid and look at the jumps
# around each breakpoint.
for b in profile.breakpoints:
    left = profile.value(max(b - 1e-9, 0.0))
    right = profile.value(min(b + 1e-9, 1.0))
    print(f"  continuity at {b:.4f}: left {left:.9f}  right {right:.9f}")

# Total mass integrates to exactly 1 because of how c was chosen.
mass = profile.mass_closed_form()
quad_mass = sum(
    adaptive_simpson(lambda x: float(profile.value(x)), a, b, 1e-11)
    for a, b in zip([0.0, *profile.breakpoints], [*profile.breakpoints, 1.0])
)
print(f"mass (closed form)  = {mass:.15f}")
print(f"mass (quadrature)   = {quad_mass:.15f}")

# The charged-cost integral drives the final inapproximability ratio.
# soundness_integral already cross-checks closed form against adaptive
# Simpson internally and raises if they ever disagree.
integral, ratio = hc.soundness_integral(c)
print(f"charged integral    = {integral:.15f}")
print(f"gap ratio           = {ratio:.15f}")

# All of the above, bundled.
mc = hc.minsum_constants()
print()
print("bundle check:")
for name in ("c", "d1", "d2", "threshold", "mass", "integral", "gap_ratio"):
    print(f"  {name:<10} {getattr(mc, name):.12f}")

assert ratio >= 1.415
print()
print("ratio clears 1.415, as advertised")
