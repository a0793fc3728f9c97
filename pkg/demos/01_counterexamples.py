"""Non-uniqueness: two finite sets with two genuinely different centerings.

K1 = {-1, 0, 1} and K2 = {±3/sqrt(13)} share the centroid 0.  The map
x -> x/(3 - x) sends both sets to configurations with centroid 1/12, and
that map is not affine, so the common centering is not unique.
"""

import numpy as np

from projcentroid.centering import fit_points_to_points
from projcentroid.projective import apply

K1 = np.array([[-1.0], [0.0], [1.0]])
K2 = np.array([[3 / np.sqrt(13)], [-3 / np.sqrt(13)]])

res = fit_points_to_points(K1, K2)
print(f"{res.n_classes} centering classes found (residual {res.residual:.1e})")
for y, m in zip(res.ys, res.maps):
    c1, c2 = apply(m, K1).mean(), apply(m, K2).mean()
    print(f"  y = {float(y[0]):+.6f}: centroids {c1:+.6f}, {c2:+.6f}")
