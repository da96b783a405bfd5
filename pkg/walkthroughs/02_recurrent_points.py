"""
Linking of recurrent points
===========================

A point that only comes back close to itself is handled by closing each
return with a short chord and averaging the crossing count over the return
times.  On the invariant circles of the radial example the average settles
after two iterates.
"""
import numpy as np

from surflink.isotopy import lift
from surflink.linking import trajectory_angle, triple_linking_recurrent
from surflink.recurrence import Disk, first_return, rotation_number_annulus
from surflink.zoo import rigid_rotation, zoo

# return times of a golden-mean rotation take three values (Fibonacci numbers)
g = (np.sqrt(5) - 1) / 2
orb = first_return(rigid_rotation(g).time_one, Disk((0.2, 0.3), 0.01), [0.2, 0.3], 1000,
                   "annulus")
print("golden rotation return times:", sorted(set(orb.times.tolist())))
print("rotation number:", rotation_number_annulus(rigid_rotation(g).time_one, [0.2, 0.3]).value)

e = zoo("radial-fast")
L = lift(e.iso)
z0, z1 = e.fixed["z0"], e.fixed["z1"]
for k in range(2, 6):
    zk = e.fixed["c%d" % k]
    ang = trajectory_angle(L, zk, z0) / np.pi
    r = triple_linking_recurrent(L, z0, z1, zk, tol=1e-9)
    print("circle 1/%d: angle %.1f pi, triple linking %.4f (returns: %d)"
          % (k, ang, r.value, r.info["returns"]))
