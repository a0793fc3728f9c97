"""The Santalo point: the interior point whose polar body has centroid 0.

It is also where the polar area is smallest.  Symmetric bodies have it at
their center, and triangles at their vertex centroid.
"""

import numpy as np

from projcentroid.centering import santalo_point
from projcentroid.geometry import convex_hull, polar_dual

T = np.array([[0.0, 0.0], [3.0, 0.2], [1.0, 2.0]])
print("triangle:", santalo_point(convex_hull(T)), "vertex centroid:", T.mean(axis=0))

Q = np.array([[0.0, 0.0], [4.0, 0.0], [3.0, 2.0], [0.0, 1.0]])
s = santalo_point(convex_hull(Q))
print("quadrilateral:", s)

# brute-force check: polar area on a grid near s
def polar_area(V, y):
    return polar_dual(convex_hull(V), center=y).volume

best = min(((polar_area(Q, s + [dx, dy]), dx, dy)
            for dx in np.linspace(-0.05, 0.05, 11) for dy in np.linspace(-0.05, 0.05, 11)))
print(f"grid minimum of polar area at offset ({best[1]:+.3f}, {best[2]:+.3f})")
