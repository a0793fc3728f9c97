"""Projective transformations that make the centroids of two sets coincide.

The sets can be finite point sets, simplicial (possibly non-convex) bodies,
convex polytopes, balls and ellipsoids.  Solutions are critical points of
logarithmic volume/moment functionals; uniqueness is certified with bounds
on Hilbert-metric diameters and widths.
"""

from .centering import (
    CenteringResult,
    ball_pair_santalo,
    fit_body_to_ball,
    fit_body_to_body,
    fit_point_to_body,
    fit_point_to_points,
    fit_points_to_body,
    fit_points_to_points,
    mobius_center,
    santalo_pair,
    santalo_point,
)
from .geometry import Polytope, Simplex, SimplicialBody, convex_hull, cross_ratio, polar_dual
from .hilbert import hilbert_diameter, hilbert_distance, hilbert_width, kappa
from .moments import Ellipsoid, Moments, body_moments, mapped_body_moments
from .polarity import count_centering_classes, polar_point
from .projective import ProjectiveMap, apply, from_infinity_vector, lorentz_ball_map

__version__ = "0.1.0"

__all__ = [
    "CenteringResult", "Ellipsoid", "Moments", "Polytope", "ProjectiveMap", "Simplex",
    "SimplicialBody", "apply", "ball_pair_santalo", "body_moments", "convex_hull",
    "count_centering_classes", "cross_ratio", "fit_body_to_ball", "fit_body_to_body",
    "fit_point_to_body", "fit_point_to_points", "fit_points_to_body", "fit_points_to_points",
    "from_infinity_vector", "hilbert_diameter", "hilbert_distance", "hilbert_width", "kappa",
    "lorentz_ball_map", "mapped_body_moments", "mobius_center", "polar_dual", "polar_point",
    "santalo_pair", "santalo_point",
]
