"""
Classical action of a Hamiltonian flow
======================================

For the pendulum-like flow of H = -cos(2 pi x) cos(2 pi y) / 2 pi on the
torus the critical points are fixed, their trajectory loops are constant,
and the action reduces to -H.  The area swept by a path between two fixed
points gives the action difference directly.
"""
import numpy as np

from surflink.action import action_difference, classical_action, classical_delta, swept_area
from surflink.cover import TORUS
from surflink.isotopy import lift
from surflink.measures import GridDensity
from surflink.zoo import pendulum

e = pendulum(h=1e-2)
x, y = e.fixed["min0"], e.fixed["saddle0"]
ax, ay = classical_action(e.iso, x), classical_action(e.iso, y)
print("A(min) = %.6f   A(saddle) = %.6f   1/2pi = %.6f" % (ax.value, ay.value, 1 / (2 * np.pi)))
print("delta(min, saddle) = %.6f" % classical_delta(e.iso, x, y))
print("swept area         = %.6f" % swept_area(lift(e.iso), x, y))

# the integrated linking number against area: with the conventions used here it comes
# out with the opposite sign of delta (see the notes in the README)
imu = action_difference(lift(e.iso), x, y, GridDensity.lebesgue_box(TORUS, n=(8, 8)),
                        n_batches=4, rng=0)
print("i_mu(min, saddle)  = %.4f +- %.4f" % (imu.value, imu.stderr))
