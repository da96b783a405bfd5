"""
Linking numbers of fixed points
===============================

Two points fixed by an isotopy trace closed loops; the direction from one
to the other turns an integer number of times.  On the torus the count is
summed over all deck translates of the second point.
"""
import numpy as np

from surflink.isotopy import lift
from surflink.linking import deck_summed_linking, planar_linking, triple_linking_fixed
from surflink.zoo import chart_point, rotation_loop, torus_chart, zoo

# a full turn of the plane links every point with the origin once
L = lift(rotation_loop())
print("rotation loop:", planar_linking(L, [0, 0], [0.4, 0.3]))

# the bump example: z_k and w_k sit in the k-th disk, w_k halfway out
bump = zoo("bump-annuli", k_max=4)
Lb = lift(bump.iso, window=((-1, -1), (1, 1)))
for k in range(1, 5):
    v = planar_linking(Lb, bump.fixed["z%d" % k], bump.fixed["w%d" % k])
    print("bump pair k=%d: %7d   2(-1)^k (k+1)^5 = %d" % (k, v, 2 * (-1) ** k * (k + 1) ** 5))

# planted in one cell of the torus, the deck sum only picks up the chart term
T = lift(torus_chart(bump.iso))
z, w = chart_point(bump.fixed["z2"]), chart_point(bump.fixed["w2"])
rec = deck_summed_linking(T, z, w)
print("deck-summed on the torus:", rec.value, "from", len(rec.deck_terms), "translates")

# the shear (x, y + t sin 2 pi x): z = (1/4, 0) is fixed but its lift moves up by one,
# so the triple linking with the lifts (0, 1/2), (k, 1/2) counts the columns in between
shear = zoo("shear")
Ls = lift(shear.iso)
print("shear triple linkings:",
      [triple_linking_fixed(Ls, shear.fixed["a0"], shear.fixed["a%d" % k], shear.fixed["z"]).value
       for k in range(1, 6)])
