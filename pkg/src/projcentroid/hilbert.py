"""Hilbert metric quantities and the uniqueness certificates built on them.

For p, q inside a convex body K with chord endpoints a, p, q, b the Hilbert
distance is 1/2 |log cr(p, q; a, b)|.  The diameter of K2 inside K1 is the
largest such distance between points of K2; the maximum Hilbert width is
computed through polarity as diam_{K2°}(K1°).
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import CoincidentPoints, ContainmentViolated, PointOutside
from .geometry import TAU_GEO, Polytope, as_points, polar_dual
from .moments import Ellipsoid

_CHUNK = 4096


def kappa(d):
    """Width-ratio threshold sqrt(6 / ((d+1)(d+2))) for two-body uniqueness."""
    return float(np.sqrt(6.0 / ((d + 1) * (d + 2))))


def ratio_bound(k):
    """log((1 + k) / (1 - k))."""
    return float(np.log((1.0 + k) / (1.0 - k)))


BOUND_FACTORS = {
    "BodyPair": kappa,
    "BallOuter": lambda d: float(np.sqrt(3.0 / (d + 2))),
    "BallInner": lambda d: float(np.sqrt(2.0 / (d + 1))),
}


@dataclass(frozen=True)
class UniquenessCertificate:
    """Sufficient condition for uniqueness: measured < bound."""

    kind: str
    measured: float
    bound: float
    holds: bool

    def to_dict(self):
        return {"kind": self.kind, "measured": self.measured, "bound": self.bound,
                "holds": self.holds}


def make_certificate(kind, measured, d):
    bound = ratio_bound(BOUND_FACTORS[kind](d))
    measured = float(measured)
    return UniquenessCertificate(kind, measured, bound, bool(measured < bound - 1e-12))


# ----------------------------------------------------------------------------
# Chords and distances
# ----------------------------------------------------------------------------

def _chords(K, P, U):
    """Parameters (t_lo, t_hi) where the lines P + t U leave K (row-wise)."""
    if isinstance(K, Ellipsoid):
        D = P - K.center
        AU = U @ K.shape
        a = np.einsum("ij,ij->i", AU, U)
        b = np.einsum("ij,ij->i", AU, D)
        c = np.einsum("ij,jk,ik->i", D, K.shape, D) - 1.0
        disc = np.sqrt(np.maximum(b * b - a * c, 0.0))
        return (-b - disc) / a, (-b + disc) / a
    AU = U @ K.normals.T
    S = K.offsets - P @ K.normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        T = S / AU
    t_hi = np.where(AU > 0, T, np.inf).min(axis=1)
    t_lo = np.where(AU < 0, T, -np.inf).max(axis=1)
    return t_lo, t_hi


def _pair_distances(K, P, Q):
    out = np.empty(len(P))
    for s in range(0, len(P), _CHUNK):
        p, q = P[s:s + _CHUNK], Q[s:s + _CHUNK]
        u = q - p
        zero = np.linalg.norm(u, axis=1) == 0
        u[zero] = 1.0
        t_lo, t_hi = _chords(K, p, u)
        with np.errstate(divide="ignore", invalid="ignore"):
            cr = (t_lo * (1.0 - t_hi)) / (t_hi * (1.0 - t_lo))
            dist = 0.5 * np.abs(np.log(cr))
        dist[zero] = 0.0
        out[s:s + _CHUNK] = dist
    return out


def _interior(K, X):
    if isinstance(K, Ellipsoid):
        return K.contains(X)
    return K.contains(X)


def hilbert_distance(K, p, q):
    """Hilbert distance between interior points p and q of K."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if not (_interior(K, p) and _interior(K, q)):
        raise PointOutside("points must be strictly inside the body")
    if np.array_equal(p, q):
        return 0.0
    return float(_pair_distances(K, p[None], q[None])[0])


# ----------------------------------------------------------------------------
# Containment
# ----------------------------------------------------------------------------

def _max_quadratic_on_sphere(M, b):
    """max of s^T M s + 2 b^T s over |s| = 1 (trust-region boundary problem)."""
    mu, Q = np.linalg.eigh(M)
    c = Q.T @ b
    top = mu[-1]
    scale = max(1.0, np.abs(mu).max(), np.abs(c).max())
    rest = mu < top - 1e-12 * scale
    hard = np.all(np.abs(c[~rest]) <= 1e-14 * scale) and np.sum(
        c[rest] ** 2 / (top - mu[rest]) ** 2) <= 1.0
    if hard:
        s = np.zeros_like(c)
        s[rest] = -c[rest] / (mu[rest] - top)
        j = np.flatnonzero(~rest)[0]
        s[j] = np.sqrt(max(0.0, 1.0 - s @ s))
    else:
        lo = top + 1e-300
        hi = top + np.linalg.norm(c) + 1.0
        phi = lambda lam: np.sum(c ** 2 / (lam - mu) ** 2) - 1.0
        while phi(hi) > 0:
            hi = top + 2.0 * (hi - top)
        lo = top
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if phi(mid) > 0:
                lo = mid
            else:
                hi = mid
        s = c / (hi - mu)
        s /= np.linalg.norm(s)
    return float(s @ (mu * s) + 2.0 * c @ s)


def _max_level_over(outer, inner):
    """Largest outer-defining quantity over the inner body.

    For a polytope outer returns max over facets of (a.x - b)/scale (so < 0 means
    interior); for an ellipsoid outer returns max level - 1.
    """
    if isinstance(outer, Polytope):
        if isinstance(inner, Ellipsoid):
            sup = inner.center @ outer.normals.T + np.sqrt(
                np.einsum("ij,jk,ik->i", outer.normals, inner.inverse_shape, outer.normals))
        else:
            sup = (_vertices(inner) @ outer.normals.T).max(axis=0)
        return float(np.max(sup - outer.offsets) / outer.scale)
    if isinstance(inner, Ellipsoid):
        L = np.linalg.cholesky(inner.inverse_shape)
        D = inner.center - outer.center
        M = L.T @ outer.shape @ L
        b = L.T @ outer.shape @ D
        return _max_quadratic_on_sphere(M, b) + float(D @ outer.shape @ D) - 1.0
    return float(np.max(outer.level(_vertices(inner))) - 1.0)


def _vertices(K):
    if isinstance(K, Polytope):
        return K.vertices
    return as_points(K)


def check_containment(outer, inner):
    """Raise ContainmentViolated unless inner lies in the interior of outer."""
    if not _max_level_over(outer, inner) < -TAU_GEO:
        raise ContainmentViolated("inner body is not inside the interior of the outer body")


# ----------------------------------------------------------------------------
# Diameter and width
# ----------------------------------------------------------------------------

def _sphere_directions(d, n, rng):
    if d == 2:
        t = 2.0 * np.pi * np.arange(n) / n
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    U = rng.normal(size=(n, d))
    U = np.vstack([np.eye(d), -np.eye(d), U])
    return U / np.linalg.norm(U, axis=1)[:, None]


def _ellipsoid_diameter(K1, E, n_samples=96, n_polish=4, seed=0):
    """Maximize the Hilbert distance over pairs of boundary points of E."""
    d = E.dim
    rng = np.random.default_rng(seed)
    L = np.linalg.cholesky(E.inverse_shape)
    S = _sphere_directions(d, n_samples, rng)
    X = E.center + S @ L.T
    i, j = np.triu_indices(len(X), k=1)
    dist = _pair_distances(K1, X[i], X[j])
    best = float(dist.max())

    def neg(z):
        s1, s2 = z[:d], z[d:]
        n1, n2 = np.linalg.norm(s1), np.linalg.norm(s2)
        if n1 == 0 or n2 == 0:
            return 0.0
        p = E.center + (s1 / n1) @ L.T
        q = E.center + (s2 / n2) @ L.T
        return -float(_pair_distances(K1, p[None], q[None])[0])

    for k in np.argsort(dist)[::-1][:n_polish]:
        z0 = np.concatenate([S[i[k]], S[j[k]]])
        res = minimize(neg, z0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        best = max(best, -float(res.fun))
    return best


def hilbert_diameter(K1, K2):
    """Largest Hilbert distance in K1 between two points of K2.

    K2 may be a Polytope (maximum over vertex pairs), an Ellipsoid (boundary
    optimization) or an array of points.
    """
    check_containment(K1, K2)
    if isinstance(K2, Ellipsoid):
        return _ellipsoid_diameter(K1, K2)
    V = _vertices(K2)
    if len(V) < 2:
        return 0.0
    i, j = np.triu_indices(len(V), k=1)
    return float(_pair_distances(K1, V[i], V[j]).max())


def polar(K, center):
    """Polar body {z : <x - c, z - c> >= -1 for all x in K} of a Polytope or Ellipsoid."""
    c = np.asarray(center, dtype=float)
    if isinstance(K, Polytope):
        return polar_dual(K, c)
    e = K.center - c
    M = K.inverse_shape - np.outer(e, e)
    if not K.contains(c):
        raise PointOutside("polar center must be inside the ellipsoid")
    Me = np.linalg.solve(M, e)
    return Ellipsoid(c + Me, M / (1.0 + e @ Me))


def interior_point(K):
    if isinstance(K, Ellipsoid):
        return K.center.copy()
    return _vertices(K).mean(axis=0)


def hilbert_width(K1, K2, center=None):
    """Maximum Hilbert width of K2 in K1, computed as diam_{K2°}(K1°) with
    polars about an interior point of K2."""
    check_containment(K1, K2)
    c = interior_point(K2) if center is None else np.asarray(center, dtype=float)
    return hilbert_diameter(polar(K2, c), polar(K1, c))


def body_pair_certificate(K1, K2):
    return make_certificate("BodyPair", hilbert_width(K1, K2), K1.dim)


def ball_outer_certificate(K):
    """Certificate for fitting the centroid of K to that of the ball around it."""
    B = Ellipsoid.ball(K.dim)
    return make_certificate("BallOuter", hilbert_width(B, K), K.dim)


def ball_inner_certificate(K):
    """Certificate for the Santaló point of the pair (ball, K)."""
    B = Ellipsoid.ball(K.dim)
    return make_certificate("BallInner", hilbert_diameter(B, K), K.dim)
