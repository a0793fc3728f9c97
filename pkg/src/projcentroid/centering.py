"""High-level centering problems, one entry point per problem family.

Each solver translates the data so that the origin is a convenient interior
point, finds the critical points of the matching functional, and reports the
maps back in the original coordinates together with independently
recomputed residuals ||centroid(phi K1) - centroid(phi K2)||.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import functionals as fn
from .errors import (
    ContainmentViolated,
    DegenerateBody,
    DegenerateGeodesic,
    DegenerateInput,
    DegenerateSpan,
    QOutsideHull,
    SupportCountViolated,
    TooFewPoints,
)
from .geometry import TAU_GEO, Polytope, SimplicialBody, as_points, convex_hull, polar_dual
from .hilbert import (
    ball_inner_certificate,
    ball_outer_certificate,
    body_pair_certificate,
    check_containment,
    hilbert_diameter,
    interior_point,
    make_certificate,
    polar,
)
from .moments import Ellipsoid, body_moments, ellipsoid_image, image_body_moments
from .projective import (
    ProjectiveMap,
    affine_map,
    apply,
    compose,
    coset_infinity_vector,
    from_infinity_vector,
    inverse,
    lorentz_ball_map,
    translation,
)
from .solver import CONVERGED, SolveOptions, multistart, solve_critical


@dataclass
class CenteringResult:
    """Critical classes of a centering problem.

    ``maps[i]`` is the map of class i in the original coordinates, ``ys[i]``
    its coset parameter (the hyperplane <x, y> = -1 goes to infinity) and
    ``residuals[i]`` the recomputed centroid mismatch.  For Santaló-type
    problems ``points[i]`` holds the corresponding Santaló point.
    """

    reports: list
    maps: list
    ys: list
    residuals: list
    certificate: object = None
    status: str = CONVERGED
    points: list = field(default_factory=list)

    @property
    def n_classes(self):
        return len(self.maps)

    @property
    def residual(self):
        return max(self.residuals) if self.residuals else float("nan")


# ----------------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------------

def _shift_body(K, c):
    if isinstance(K, Ellipsoid):
        return Ellipsoid(K.center - c, K.shape)
    if isinstance(K, Polytope):
        K = K.as_body()
    return SimplicialBody(K.simplices - c, validate=False)


def _as_body(K):
    if isinstance(K, (SimplicialBody, Ellipsoid)):
        return K
    if isinstance(K, Polytope):
        return K.as_body()
    return convex_hull(K).as_body()


def _hull_of(K):
    if isinstance(K, Polytope):
        return K
    if isinstance(K, SimplicialBody):
        return K.hull()
    if isinstance(K, Ellipsoid):
        return K
    return convex_hull(K)


def _centroid_after(m, K):
    """Centroid of m(K) for points, bodies or ellipsoids, recomputed from scratch."""
    if isinstance(K, Ellipsoid):
        return ellipsoid_image(K, m).center
    if isinstance(K, (SimplicialBody, Polytope)):
        return image_body_moments(K, m).centroid
    return apply(m, as_points(K, m.dim)).mean(axis=0)


def _conjugated(y, c):
    """phi_y acting in coordinates centered at c, as a map of the original space."""
    T = translation(-c)
    return compose(compose(T, from_infinity_vector(y)), inverse(T))


def _coset_vector(m):
    v = coset_infinity_vector(m)
    return v if isinstance(v, np.ndarray) else None


def _collect(reports, to_map, residual_of, certificate=None):
    good = [r for r in reports if r.status == CONVERGED]
    maps = [to_map(r.y_star) for r in good]
    status = CONVERGED if good else (reports[0].status if reports else "MaxIter")
    return CenteringResult(
        reports=good if good else list(reports),
        maps=maps,
        ys=[_coset_vector(m) for m in maps],
        residuals=[float(residual_of(m)) for m in maps],
        certificate=certificate,
        status=status,
    )


def _opts(opts, seed):
    return opts or SolveOptions(seed=seed)


def _strict_hull(points, target, err):
    P = as_points(points)
    try:
        hull = convex_hull(P)
    except DegenerateInput as exc:
        raise DegenerateSpan(str(exc)) from None
    if not np.all(hull.contains(as_points(target, P.shape[1]))):
        raise err("target must lie strictly inside the convex hull")
    return hull


# ----------------------------------------------------------------------------
# point sets
# ----------------------------------------------------------------------------

def fit_point_to_points(points, q, n_starts=8, seed=0, opts=None):
    """Maps making q the centroid of the points; the class is unique."""
    P = as_points(points)
    q = np.atleast_1d(np.asarray(q, dtype=float))
    _strict_hull(P, q[None, :], QOutsideHull)
    f = fn.point_vs_points(P - q, np.zeros_like(q))
    reports = multistart(f, n_starts, seed, _opts(opts, seed))
    return _collect(
        reports,
        lambda y: _conjugated(y, q),
        lambda m: np.linalg.norm(apply(m, P).mean(axis=0) - apply(m, q)),
    )


def fit_points_to_points(P, Q, n_starts=16, seed=0, opts=None):
    """All classes matching the centroid of P with the centroid of Q, conv Q inside int conv P."""
    P, Q = as_points(P), as_points(Q)
    if Q.shape[1] != P.shape[1]:
        raise ValueError("point sets must have the same dimension")
    _strict_hull(P, Q, ContainmentViolated)
    c = Q.mean(axis=0)
    f = fn.points_vs_points(P - c, Q - c)
    reports = multistart(f, n_starts, seed, _opts(opts, seed))
    return _collect(
        reports,
        lambda y: _conjugated(y, c),
        lambda m: np.linalg.norm(apply(m, P).mean(axis=0) - apply(m, Q).mean(axis=0)),
    )


# ----------------------------------------------------------------------------
# bodies
# ----------------------------------------------------------------------------

def fit_point_to_body(K, q, n_starts=4, seed=0, opts=None):
    """Maps making q the centroid of the simplicial body K."""
    K = _as_body(K)
    q = np.atleast_1d(np.asarray(q, dtype=float))
    hull = K.hull()
    if not hull.contains(q):
        raise QOutsideHull("q must lie strictly inside conv K")
    f = fn.point_vs_body(_shift_body(K, q))
    reports = multistart(f, n_starts, seed, _opts(opts, seed))
    return _collect(
        reports,
        lambda y: _conjugated(y, q),
        lambda m: np.linalg.norm(_centroid_after(m, K) - apply(m, q)),
    )


def santalo_residual(L, s):
    """|| centroid(L°_s) - s ||, zero exactly at the Santaló point."""
    return np.linalg.norm(body_moments(polar_dual(L, s)).centroid - s)


def santalo_point(L, opts=None):
    """The point s inside L at which the polar body L°_s has centroid s.

    Solved as a point-vs-body problem for the polar body about the vertex
    mean c: with K = (L - c)°, the map phi_y(K) is (L - c)°_y - y, so
    centroid(phi_y K) = 0 exactly when c + y is the Santaló point.
    """
    try:
        L = L if isinstance(L, Polytope) else convex_hull(L)
    except DegenerateInput as exc:
        raise DegenerateBody(str(exc)) from None
    c = L.vertices.mean(axis=0)
    K = polar_dual(L, c)
    f = fn.point_vs_body(_shift_body(K, c))
    rep = solve_critical(f, np.zeros(L.dim), _opts(opts, 0))
    return c + rep.y_star


def _polar_pair_problem(outer, inner, n_starts, seed, opts, certificate, residual_of):
    """Santaló points of the pair via body-vs-body on the polars about an
    interior point c of the inner body.  Returns a CenteringResult whose
    ``points`` are the Santaló points."""
    c = interior_point(inner)
    K_small = polar(outer, c)     # polar of the outer body is the inner one
    K_big = polar(inner, c)
    f = fn.body_vs_body(_shift_body(K_big, c), _shift_body(K_small, c))
    reports = multistart(f, n_starts, seed, _opts(opts, seed))
    res = _collect(reports, lambda y: _conjugated(y, c), lambda m: 0.0, certificate)
    res.points = [c + r.y_star for r in res.reports if r.status == CONVERGED]
    res.residuals = [float(residual_of(s)) for s in res.points]
    return res


def _polar_centroid(K, s):
    P = polar(K, s)
    return P.center if isinstance(P, Ellipsoid) else body_moments(P).centroid


def santalo_pair(L1, L2, n_starts=16, seed=0, opts=None):
    """Points y with centroid((L1)°_y) = centroid((L2)°_y), for L2 inside int L1."""
    L1 = L1 if isinstance(L1, (Polytope, Ellipsoid)) else convex_hull(L1)
    L2 = L2 if isinstance(L2, (Polytope, Ellipsoid)) else convex_hull(L2)
    check_containment(L1, L2)
    # the diameter of L2 in L1 is the width of the polar pair
    cert = make_certificate("BodyPair", hilbert_diameter(L1, L2), L1.dim)
    return _polar_pair_problem(
        L1, L2, n_starts, seed, opts, cert,
        lambda s: np.linalg.norm(_polar_centroid(L1, s) - _polar_centroid(L2, s)),
    )


def _support_hyperplanes(K, P):
    """Hull facets of K and hyperplanes through d-subsets of P supporting K."""
    hull = K.hull()
    d = hull.dim
    planes = list(zip(hull.normals, hull.offsets))
    V = hull.vertices
    for idx in itertools.combinations(range(len(P)), d):
        S = P[list(idx)]
        M = np.hstack([S, np.ones((d, 1))])
        _, sv, vt = np.linalg.svd(M)
        if sv[-1] <= 1e-12:
            continue
        a, c0 = vt[-1, :d], vt[-1, d]
        na = np.linalg.norm(a)
        a, c0 = a / na, c0 / na
        vals = V @ a + c0
        tol = TAU_GEO * hull.scale
        if np.all(vals <= tol):
            planes.append((a, -c0))
        elif np.all(vals >= -tol):
            planes.append((-a, c0))
    return planes, hull


def check_support_counts(K, points):
    """Raise SupportCountViolated if a support hyperplane of K holds
    n/(d+1) or more of the points."""
    P = as_points(points)
    n, d = P.shape
    planes, hull = _support_hyperplanes(K, P)
    tol = TAU_GEO * hull.scale
    for a, b in planes:
        count = int(np.sum(np.abs(P @ a - b) <= tol))
        if count * (d + 1) >= n:
            raise SupportCountViolated(
                f"a support hyperplane contains {count} of {n} points (limit < {n / (d + 1):g})")


def fit_points_to_body(K, points, n_starts=16, seed=0, opts=None):
    """Classes with centroid(phi K) = centroid(phi points) for points in conv K."""
    K = _as_body(K)
    P = as_points(points, K.dim)
    hull = K.hull()
    if not np.all(hull.contains(P, strict=False)):
        raise ContainmentViolated("points must lie in conv K")
    check_support_counts(K, P)
    c = hull.vertices.mean(axis=0)
    f = fn.points_vs_body(_shift_body(K, c), P - c)
    reports = multistart(f, n_starts, seed, _opts(opts, seed))
    return _collect(
        reports,
        lambda y: _conjugated(y, c),
        lambda m: np.linalg.norm(_centroid_after(m, K) - apply(m, P).mean(axis=0)),
    )


def fit_body_to_body(K1, K2, n_starts=16, seed=0, opts=None):
    """Classes with centroid(phi K1) = centroid(phi K2) for K2 inside int conv K1.

    Bodies may be Polytopes, SimplicialBodies or Ellipsoids.  A uniqueness
    certificate is attached when both bodies are convex.
    """
    H1, H2 = _hull_of(K1), _hull_of(K2)
    check_containment(H1, H2)
    B1, B2 = _as_body(K1), _as_body(K2)
    c = interior_point(H2)
    f = fn.body_vs_body(_shift_body(B1, c), _shift_body(B2, c))
    reports = multistart(f, n_starts, seed, _opts(opts, seed))
    convex = all(isinstance(K, (Polytope, Ellipsoid)) for K in (K1, K2))
    cert = body_pair_certificate(K1, K2) if convex else None
    return _collect(
        reports,
        lambda y: _conjugated(y, c),
        lambda m: np.linalg.norm(_centroid_after(m, B1) - _centroid_after(m, B2)),
        cert,
    )


# ----------------------------------------------------------------------------
# balls
# ----------------------------------------------------------------------------

def _ball_fixing_from(y):
    """phi_y followed by the affine map taking phi_y(B) back to B centered at 0."""
    E = ellipsoid_image(Ellipsoid.ball(len(y)), from_infinity_vector(y))
    w, U = np.linalg.eigh(E.shape)
    root = (U * np.sqrt(w)) @ U.T
    return compose(from_infinity_vector(y), affine_map(root, -root @ E.center))


def fit_body_to_ball(K, n_starts=16, seed=0, opts=None):
    """Ball-fixing maps phi with centroid(phi K) = 0 for K inside the open unit ball."""
    H = _hull_of(K)
    B = Ellipsoid.ball(H.dim)
    check_containment(B, H)
    body = _as_body(K)
    f = fn.body_vs_body(B, body)
    reports = multistart(f, n_starts, seed, _opts(opts, seed))
    cert = ball_outer_certificate(K) if isinstance(K, (Polytope, Ellipsoid)) else None
    return _collect(
        reports,
        _ball_fixing_from,
        lambda m: np.linalg.norm(_centroid_after(m, body)),
        cert,
    )


def ball_pair_santalo(K, n_starts=16, seed=0, opts=None):
    """Points y with centroid(K°_y) = centroid((B^d)°_y) for K inside the unit ball."""
    K = K if isinstance(K, (Polytope, Ellipsoid)) else convex_hull(K)
    B = Ellipsoid.ball(K.dim)
    check_containment(B, K)
    return _polar_pair_problem(
        B, K, n_starts, seed, opts, ball_inner_certificate(K),
        lambda s: np.linalg.norm(_polar_centroid(B, s) - _polar_centroid(K, s)),
    )


def _check_geodesic(P):
    n = len(P)
    on_sphere = np.abs(np.linalg.norm(P, axis=1) - 1.0) <= 1e-12
    S = P[on_sphere]
    if len(S):
        _, counts = np.unique(np.round(S, 12), axis=0, return_counts=True)
        if counts.max() * 2 >= n:
            raise DegenerateGeodesic("a sphere point carries at least half of the mass")
    if on_sphere.all():
        distinct = np.unique(np.round(P, 12), axis=0)
        if len(distinct) <= 2:
            raise DegenerateGeodesic("all points lie on one geodesic")


def mobius_center(points, opts=None, max_rounds=12):
    """Ball-fixing projective map m with sum m(p_i) = 0; returns (m, mapped points).

    Each round minimizes the ball functional for the current points and
    recenters them with the Lorentz boost at z = -y*; the boosts are composed
    into one map.
    """
    P = as_points(points)
    n, d = P.shape
    if n < 3:
        raise TooFewPoints("need at least 3 points")
    if np.any(np.linalg.norm(P, axis=1) > 1.0 + 1e-12):
        raise ContainmentViolated("points must lie in the closed unit ball")
    _check_geodesic(P)
    opts = opts or SolveOptions()
    m = affine_map(np.eye(d), np.zeros(d))
    X = P
    for _ in range(max_rounds):
        if np.linalg.norm(X.mean(axis=0)) <= 1e-13:
            break
        rep = solve_critical(fn.BallFunctional(X), np.zeros(d), opts)
        boost = lorentz_ball_map(-rep.y_star)
        m = compose(m, boost)
        X = apply(m, P)
    return m, X

