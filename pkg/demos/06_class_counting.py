"""Counting centering classes of n points and a target q in the plane.

The classes correspond to chambers of the dual line arrangement whose
polar point lands on q's side; the count depends only on n.
"""

import numpy as np

from projcentroid.polarity import chambers, count_centering_classes

rng = np.random.default_rng(0)
for n in (3, 4, 5, 6):
    P = rng.normal(size=(n, 2))
    q = rng.dirichlet(np.ones(n)) @ P
    print(f"n = {n}: {count_centering_classes(P, q)} classes, "
          f"{len(chambers(P))} chambers (n(n-1)/2 + 1 = {n * (n - 1) // 2 + 1})")
