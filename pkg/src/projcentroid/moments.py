"""Exact volumes, first and second moments of simplices, simplicial bodies,
their projective images, and ellipsoids.

Second moments are kept as full matrices (integral of x x^T) so Hessians of
the body functionals can be assembled from a single pass over the simplices.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import DegenerateSimplex, NotAdmissible, OutsideDomain, ZeroDirection
from .geometry import TAU_GEO, Polytope, Simplex, SimplicialBody, as_points
from .projective import ProjectiveMap, apply, from_infinity_vector


@dataclass(frozen=True, eq=False)
class Moments:
    """Volume, first moment (integral of x) and second moment (integral of x x^T)."""

    volume: float
    first: np.ndarray
    second: np.ndarray

    @property
    def dim(self):
        return self.first.size

    @property
    def centroid(self):
        return self.first / self.volume

    @property
    def normalized_second(self):
        """Second moment per unit volume, integral of x x^T / vol."""
        return self.second / self.volume

    @property
    def covariance(self):
        g = self.centroid
        return self.second / self.volume - np.outer(g, g)

    def __add__(self, other):
        return Moments(self.volume + other.volume, self.first + other.first,
                       self.second + other.second)


def unit_ball_volume(d):
    """Volume of the d-dimensional unit ball via beta_d = beta_{d-2} * 2 pi / d."""
    vols = [1.0, 2.0]
    for k in range(2, d + 1):
        vols.append(vols[k - 2] * 2.0 * np.pi / k)
    return vols[d]


def _stack_moments(S, volumes=None):
    """Per-simplex (volume, first, second) for a stack S of shape (k, d+1, d)."""
    k, m, d = S.shape
    if volumes is None:
        volumes = np.abs(np.linalg.det(S[:, 1:, :] - S[:, :1, :])) / factorial(d)
    s = S.sum(axis=1)
    first = volumes[:, None] * s / (d + 1)
    outer = np.einsum("kji,kjl->kil", S, S) + np.einsum("ki,kl->kil", s, s)
    second = volumes[:, None, None] / ((d + 1) * (d + 2)) * outer
    return volumes, first, second


def _sum_moments(vols, first, second):
    return Moments(float(vols.sum()), first.sum(axis=0), second.sum(axis=0))


def simplex_moments(s):
    """Exact moments of a single simplex (a Simplex or a (d+1, d) array)."""
    V = s.vertices if isinstance(s, Simplex) else as_points(s)
    if V.shape[0] != V.shape[1] + 1:
        raise DegenerateSimplex("a d-simplex needs d+1 vertices")
    vols, first, second = _stack_moments(V[None])
    if not vols[0] > 0:
        raise DegenerateSimplex("simplex has zero volume")
    return _sum_moments(vols, first, second)


def _simplices_of(K):
    if isinstance(K, (SimplicialBody, Polytope)):
        return K.simplices
    S = np.asarray(K, dtype=float)
    if S.ndim != 3:
        raise TypeError("expected a SimplicialBody, Polytope or (k, d+1, d) array")
    return S


def body_moments(K):
    """Moments of a simplicial body (or polytope) by additivity."""
    return _sum_moments(*_stack_moments(_simplices_of(K)))


def mapped_body_moments(K, y):
    """Exact moments of phi_y(K) for phi_y(x) = x / (1 + <x, y>).

    A simplex with vertices v_j maps to the simplex with vertices phi_y(v_j)
    and volume vol / prod_j (1 + <v_j, y>).
    """
    S = _simplices_of(K)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    w = 1.0 + S @ y
    if np.min(w) <= TAU_GEO:
        raise NotAdmissible("phi_y sends part of the body to infinity")
    d = S.shape[2]
    vols = np.abs(np.linalg.det(S[:, 1:, :] - S[:, :1, :])) / factorial(d)
    vols = vols / np.prod(w, axis=1)
    return _sum_moments(*_stack_moments(S / w[..., None], vols))


def image_body_moments(K, m):
    """Moments of m(K) for a general projective map, by mapping every vertex."""
    S = _simplices_of(K)
    k, n, d = S.shape
    W = apply(m, S.reshape(-1, d)).reshape(k, n, d)
    den = (np.hstack([np.ones((k * n, 1)), S.reshape(-1, d)]) @ m.matrix[0]).reshape(k, n)
    if not (np.all(den > 0) or np.all(den < 0)):
        raise NotAdmissible("map is not admissible for the body")
    return _sum_moments(*_stack_moments(W))


# ----------------------------------------------------------------------------
# Ellipsoids
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """The body {x : (x - c)^T A (x - c) <= 1} with A symmetric positive definite."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float)).copy()
        A = np.atleast_2d(np.asarray(self.shape, dtype=float)).copy()
        if A.shape != (c.size, c.size):
            raise ValueError("shape matrix must be d x d")
        if np.max(np.abs(A - A.T)) > 1e-12 * max(1.0, np.abs(A).max()):
            raise ValueError("shape matrix must be symmetric")
        A = 0.5 * (A + A.T)
        if np.min(np.linalg.eigvalsh(A)) <= 0:
            raise ValueError("shape matrix must be positive definite")
        c.setflags(write=False)
        A.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", A)

    @classmethod
    def ball(cls, d, radius=1.0, center=None):
        c = np.zeros(d) if center is None else center
        return cls(c, np.eye(d) / radius ** 2)

    @property
    def dim(self):
        return self.center.size

    @property
    def inverse_shape(self):
        return np.linalg.inv(self.shape)

    @property
    def volume(self):
        return unit_ball_volume(self.dim) / np.sqrt(np.linalg.det(self.shape))

    def level(self, x):
        """(x - c)^T A (x - c); < 1 strictly inside."""
        D = np.asarray(x, dtype=float) - self.center
        return np.einsum("...i,ij,...j->...", D, self.shape, D)

    def contains(self, x, strict=True):
        lv = self.level(x)
        return lv < 1.0 - TAU_GEO if strict else lv <= 1.0 + TAU_GEO

    def support(self, u):
        """max <x, u> over the ellipsoid."""
        u = np.asarray(u, dtype=float)
        return float(self.center @ u + np.sqrt(u @ self.inverse_shape @ u))

    def boundary_points(self, n):
        """n points on the boundary (d = 2 only), counter-clockwise."""
        if self.dim != 2:
            raise ValueError("boundary sampling is implemented for d = 2")
        t = 2.0 * np.pi * np.arange(n) / n
        U = np.stack([np.cos(t), np.sin(t)], axis=1)
        L = np.linalg.cholesky(self.inverse_shape)
        return self.center + U @ L.T

    def quadric(self):
        """Symmetric (d+1)x(d+1) Q with (1,x) Q (1,x)^T = level(x) - 1."""
        c, A = self.center, self.shape
        d = self.dim
        Q = np.empty((d + 1, d + 1))
        Q[0, 0] = c @ A @ c - 1.0
        Q[0, 1:] = Q[1:, 0] = -(A @ c)
        Q[1:, 1:] = A
        return Q

    @classmethod
    def from_quadric(cls, Q):
        """Ellipsoid {(1,x) Q (1,x)^T <= 0}; Q must define a bounded ellipsoid."""
        Q = 0.5 * (Q + Q.T)
        q00, q, Qt = Q[0, 0], Q[1:, 0], Q[1:, 1:]
        if np.min(np.linalg.eigvalsh(Qt)) < 0:
            Q, q00, q, Qt = -Q, -q00, -q, -Qt
        c = -np.linalg.solve(Qt, q)
        r = float(q @ np.linalg.solve(Qt, q) - q00)
        if r <= 0 or np.min(np.linalg.eigvalsh(Qt)) <= 0:
            raise NotAdmissible("quadric is not a bounded ellipsoid")
        return cls(c, Qt / r)


def ellipsoid_moments(e):
    """Exact moments: centroid is the center, covariance is A^{-1} / (d + 2)."""
    vol = e.volume
    c = e.center
    return Moments(vol, vol * c, vol * (np.outer(c, c) + e.inverse_shape / (e.dim + 2)))


def ellipsoid_slack(e, y):
    """min over the ellipsoid of 1 + <x, y>; positive iff phi_y is admissible."""
    y = np.asarray(y, dtype=float)
    return float(1.0 + e.center @ y - np.sqrt(y @ e.inverse_shape @ y))


def ellipsoid_image(e, m):
    """Image of an ellipsoid under an admissible projective map."""
    if isinstance(m, ProjectiveMap):
        M = m.matrix
    else:
        M = np.asarray(m, dtype=float)
    # admissible iff the denominator row keeps one sign on the ellipsoid
    row = M[0]
    mid = row[0] + row[1:] @ e.center
    spread = np.sqrt(row[1:] @ e.inverse_shape @ row[1:])
    if abs(mid) - spread <= TAU_GEO * np.linalg.norm(row):
        raise NotAdmissible("map sends part of the ellipsoid to infinity")
    Minv = np.linalg.inv(M)
    return Ellipsoid.from_quadric(Minv.T @ e.quadric() @ Minv)


def ball_image(y):
    """The ellipsoid phi_y(B^d) for |y| < 1."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.linalg.norm(y) >= 1.0 - TAU_GEO:
        raise OutsideDomain("phi_y is admissible for the unit ball only when |y| < 1")
    return ellipsoid_image(Ellipsoid.ball(y.size), from_infinity_vector(y).matrix)


def mapped_ellipsoid_moments(e, y):
    """Moments of phi_y(e)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if ellipsoid_slack(e, y) <= TAU_GEO:
        raise NotAdmissible("phi_y sends part of the ellipsoid to infinity")
    M = np.eye(y.size + 1)
    M[0, 1:] = y
    return ellipsoid_moments(ellipsoid_image(e, M))


def moments_of(K):
    """Moments of a SimplicialBody, Polytope or Ellipsoid."""
    if isinstance(K, Ellipsoid):
        return ellipsoid_moments(K)
    return body_moments(K)


# ----------------------------------------------------------------------------
# Widths and inertia
# ----------------------------------------------------------------------------

def _unit(u):
    u = np.atleast_1d(np.asarray(u, dtype=float))
    n = np.linalg.norm(u)
    if n == 0:
        raise ZeroDirection("direction must be nonzero")
    return u / n


def directional_width(K, u):
    """Width max<x,u> - min<x,u> of K in the unit direction u/|u|."""
    u = _unit(u)
    if isinstance(K, Ellipsoid):
        return float(2.0 * np.sqrt(u @ K.inverse_shape @ u))
    if isinstance(K, Polytope):
        V = K.vertices
    elif isinstance(K, SimplicialBody):
        V = K.simplices.reshape(-1, K.dim)
    else:
        V = as_points(K)
    t = V @ u
    return float(t.max() - t.min())


def inertia_ratio(m, u):
    """I_u / vol = u^T (second/vol - gamma gamma^T) u for the unit direction u."""
    u = _unit(u)
    return float(u @ m.covariance @ u)
