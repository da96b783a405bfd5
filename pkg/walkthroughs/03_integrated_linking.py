"""
Integrating the linking number against an invariant measure
===========================================================

For radially symmetric measures the integral reduces to a quadrature over
radii; for densities it is a stratified Monte Carlo average with batch
standard errors.  Both are shown on the bump example, where the exact
values are small integers.
"""
from surflink.action import action_difference, action_differences, action_on_fixlift
from surflink.isotopy import lift
from surflink.zoo import zoo

e = zoo("bump-annuli", k_max=5)
L = lift(e.iso, window=((-1, -1), (1, 1)))
f = e.fixed

pairs = [(f["z0"], f["z%d" % k]) for k in range(1, 5)]
exact = action_differences(L, pairs, e.measure())
print("closed form:", [round(v.value, 12) for v in exact])

# Monte Carlo on the first disk only: the other disks enclose neither z_0 nor z_1
mc = action_difference(L, f["z0"], f["z1"], e.extra["grid_measure"](k_max=1, n_r=32),
                       n_batches=4, rng=1, systematic=True, tol=0.05)
print("Monte Carlo i(z0, z1): %.4f +- %.4f" % (mc.value, mc.stderr))

# the action function on fixed lifts, gauged at z_0
sp = action_on_fixlift(L, [f["z%d" % k] for k in range(5)], e.measure())
print("action values:", [round(float(v), 9) for v in sp.values], "width:", round(sp.width, 9))
