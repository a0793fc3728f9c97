"""Mobius centering of points in the unit ball.

Find a ball-preserving projective map that moves the points' centroid to
the origin.  The result is unique up to rotation, so centered Gram
matrices agree for any pre-transformed copy of the input.
"""

import numpy as np

from projcentroid.centering import mobius_center
from projcentroid.projective import apply, lorentz_ball_map

rng = np.random.default_rng(5)
P = rng.normal(size=(8, 2))
P *= (rng.uniform(0.2, 0.95, 8) / np.linalg.norm(P, axis=1))[:, None]

m, X = mobius_center(P)
print("centroid after centering:", X.mean(axis=0))
_, X2 = mobius_center(apply(lorentz_ball_map([0.5, -0.3]), P))
print("Gram gap after a boost of the input:", np.abs(X @ X.T - X2 @ X2.T).max())
