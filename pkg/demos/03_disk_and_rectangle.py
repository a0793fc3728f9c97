"""A disk-fixing projective map that centers a rectangle.

The boost (x, y) -> (sqrt2 x, sqrt3 y + 1)/(y + sqrt3) fixes the unit disk.
It centers the rectangle |x| <= a, |y| <= h exactly when h = 3/sqrt(11);
for h = 2/sqrt(5) the image trapezoid has centroid height ~0.0175.
"""

import numpy as np

from projcentroid.centering import fit_body_to_body
from projcentroid.geometry import convex_hull
from projcentroid.moments import Ellipsoid, ellipsoid_image, image_body_moments
from projcentroid.projective import ProjectiveMap

s2, s3 = np.sqrt(2), np.sqrt(3)
boost = ProjectiveMap([[s3, 0, 1], [0, s2, 0], [1, 0, s3]])
disk = Ellipsoid.ball(2)
print("disk image center:", ellipsoid_image(disk, boost.matrix).center)

for label, h in (("2/sqrt(5)", 2 / np.sqrt(5)), ("3/sqrt(11)", 3 / np.sqrt(11))):
    rect = convex_hull([[0.2, h], [-0.2, h], [-0.2, -h], [0.2, -h]])
    c = image_body_moments(rect, boost).centroid
    print(f"h = {label}: trapezoid centroid {c}")

rect = convex_hull([[0.2, 2 / np.sqrt(5)], [-0.2, 2 / np.sqrt(5)],
                    [-0.2, -2 / np.sqrt(5)], [0.2, -2 / np.sqrt(5)]])
res = fit_body_to_body(disk, rect)
print(f"solver: {res.n_classes} classes for the disk and the rectangle h = 2/sqrt(5)")
for y in res.ys:
    print("   y =", np.round(y, 6))
