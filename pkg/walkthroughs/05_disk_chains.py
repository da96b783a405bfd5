"""
Free disks, chains and rotation hulls
=====================================

A disk is free when its image misses it.  Chains of free disks that come
back to their start record how far, in the cover, the lift has travelled
(the width).  For a rigid rotation the widths are rigid; for the standard
twist an integer in the rotation hull of a disk points to a fixed point.
"""
import numpy as np

from surflink.diskchain import (FreeDisk, chain_width_algebra, find_periodic_chain,
                                locate_fixed_point, rot_hull, verify_chain_bound)
from surflink.zoo import rigid_rotation, standard_twist

rot = rigid_rotation(2 / 5)
D = FreeDisk("D", (0.2, 0.4), 0.05)
ch = find_periodic_chain(rot, [D], 10)
print("rotation 2/5: chain length %d, width %d" % (ch.length, ch.width))
print("width under T^p o H for p = 1, -1:", chain_width_algebra(ch, 1)[1],
      chain_width_algebra(ch, -1)[1])
print("hull:", rot_hull(rot, D, 30)[:2])
print("bound with N = 0:", verify_chain_bound(ch, 0).holds)

tw = standard_twist(1.5)
M = FreeDisk("M", (0.9, 0.9), 0.04)
lo, hi, _ = rot_hull(tw, M, 30)
print("twist hull of M: [%.3f, %.3f]" % (lo, hi))
for k in range(int(np.ceil(lo)), int(np.floor(hi)) + 1):
    z = locate_fixed_point(tw, k, box=((0, -1), (1, 2)))
    print("  k=%d: fixed lift near (%.4f, %.4f)" % (k, *z))
