"""Cusps: when does a body-point centering fail to exist?

K = {-1 <= x <= 1, |y| <= (1 - x)^p}, centered at the origin by the maps
phi_(a,0), which are admissible for |a| < 1.  As a -> -1 the hyperplane
sent to infinity approaches the cusp at x = 1.

  p = 3: the mapped centroid blows up to +inf, so it crosses 0 and a
         centering exists (a ~ -0.8468).
  p = 5: the mapped centroid stays negative all the way, so no centering
         exists.  Every polygonal approximation is cusp-free, though, so
         the solver still finds a solution, pressed ever closer to the
         boundary as the approximation is refined.
"""

import numpy as np
from scipy.integrate import quad

from projcentroid.cli import region_body
from projcentroid.functionals import point_vs_body
from projcentroid.solver import solve_critical


def centroid_x(a, p):
    w = lambda x: 2 * (1 - x) ** p / (1 + a * x) ** 3       # mapped density in x
    m0 = quad(w, -1, 1, limit=200)[0]
    # image x-coordinate is x/(1+ax); the Jacobian is folded into w
    m1 = quad(lambda x: x / (1 + a * x) * w(x), -1, 1, limit=200)[0]
    return m1 / m0


def body(n, p):
    x = np.linspace(-1, 1, n)
    up = (1 - x) ** p
    return region_body(x, -up, up)


for p in (3, 5):
    print(f"exponent {p}: exact mapped centroid x along a -> -1")
    for a in (0.0, -0.5, -0.9, -0.99, -0.999):
        print(f"   a = {a:+.3f}: {centroid_x(a, p):+.5f}")
    for n in (51, 201, 801):
        rep = solve_critical(point_vs_body(body(n, p)), [0.0, 0.0])
        print(f"   grid {n:4d}: status {rep.status}, y = {rep.y_star[0]:+.6f}, "
              f"slack {1 + rep.y_star[0]:.2e}")
