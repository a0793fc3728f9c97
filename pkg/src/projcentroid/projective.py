"""Projective maps of R^d acting on lifted points (1, x).

Coordinate 0 is the homogeneous one, so row 0 of a matrix is the
denominator of the induced map.  The canonical coset representative

    phi_y(x) = x / (1 + <x, y>)

has matrix [[1, y^T], [0, I]] and sends the hyperplane <x, y> = -1 to
infinity.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AtInfinity, OutsideBall, Singular
from .geometry import TAU_GEO, as_points, lift


def _normalize(M):
    M = M / np.linalg.norm(M)
    flat = M.ravel()
    nz = np.flatnonzero(np.abs(flat) > 1e-15)
    if nz.size and flat[nz[0]] < 0:
        M = -M
    return M


@dataclass(frozen=True, eq=False)
class ProjectiveMap:
    """A projective transformation, stored as a normalized (d+1)x(d+1) matrix
    (Frobenius norm 1, first nonzero entry positive)."""

    matrix: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 2:
            raise ValueError("projective matrix must be square of size d+1 >= 2")
        if not np.all(np.isfinite(M)):
            raise ValueError("projective matrix must be finite")
        s = np.linalg.svd(M, compute_uv=False)
        if s[-1] <= 1e-13 * s[0]:
            raise Singular("projective matrix is singular")
        M = _normalize(M)
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self):
        return self.matrix.shape[0] - 1

    def __call__(self, x):
        return apply(self, x)

    def __matmul__(self, other):
        """``f @ g`` is the composition f o g (apply g first)."""
        return compose(other, self)

    def equals(self, other, tol=1e-12):
        return self.matrix.shape == other.matrix.shape and np.allclose(
            self.matrix, other.matrix, atol=tol, rtol=0.0)

    def to_list(self):
        return self.matrix.ravel().tolist()


@dataclass(frozen=True)
class ThroughOrigin:
    """Marker returned by coset_infinity_vector when the hyperplane sent to
    infinity passes through the origin, so no phi_y represents the coset.

    ``normal`` is the (unit) normal of that hyperplane."""

    normal: tuple


def identity(d):
    return ProjectiveMap(np.eye(d + 1))


def from_infinity_vector(y):
    """Matrix of phi_y: x -> x / (1 + <x, y>)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    d = y.size
    M = np.eye(d + 1)
    M[0, 1:] = y
    return ProjectiveMap(M)


def affine_map(A, b):
    """Projective map of x -> A x + b."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    d = A.shape[0]
    M = np.eye(d + 1)
    M[1:, 1:] = A
    M[1:, 0] = np.asarray(b, dtype=float)
    return ProjectiveMap(M)


def translation(t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return affine_map(np.eye(t.size), t)


def _homogeneous_images(m, X):
    H = lift(X) @ m.matrix.T
    scale = np.linalg.norm(m.matrix[0]) * np.maximum(1.0, np.linalg.norm(X, axis=1))
    return H, scale


def apply(m, x):
    """Image of a point (shape (d,)) or of many points (shape (n, d))."""
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    X = as_points(x, m.dim) if not single else np.atleast_1d(x)[None, :]
    if X.shape[1] != m.dim:
        raise ValueError(f"expected points of dimension {m.dim}")
    H, scale = _homogeneous_images(m, X)
    den = H[:, 0]
    if np.any(np.abs(den) <= TAU_GEO * scale):
        raise AtInfinity("point is mapped to infinity")
    out = H[:, 1:] / den[:, None]
    return out[0] if single else out


def is_admissible(m, hull):
    """True iff the denominator has constant sign, bounded away from zero, on
    all vertices of ``hull`` (a Polytope or an (n, d) array of points)."""
    V = getattr(hull, "vertices", None)
    V = as_points(hull if V is None else V, m.dim)
    H, scale = _homogeneous_images(m, V)
    den = H[:, 0] / scale
    return bool(np.all(den > TAU_GEO) or np.all(den < -TAU_GEO))


def compose(m1, m2):
    """The map "apply m1, then m2" (matrix m2 @ m1)."""
    return ProjectiveMap(m2.matrix @ m1.matrix)


def inverse(m):
    return ProjectiveMap(np.linalg.inv(m.matrix))


def coset_infinity_vector(m, tol=1e-12):
    """Recover y with m = (affine) o phi_y, or ThroughOrigin.

    The denominator row of m is proportional to (1, y) exactly when the
    hyperplane sent to infinity misses the origin.
    """
    row = m.matrix[0]
    if abs(row[0]) <= tol * np.linalg.norm(row):
        n = row[1:] / np.linalg.norm(row[1:])
        return ThroughOrigin(tuple(n.tolist()))
    return row[1:] / row[0]


def lorentz_ball_map(z):
    """Ball-fixing projective map (a Lorentz boost) sending z to the origin.

    The boost with velocity z acts on lifted points (1, x); it preserves the
    quadratic form x_0^2 - |x|^2 and hence the unit ball and sphere.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    d = z.size
    r2 = float(z @ z)
    if r2 >= (1.0 - TAU_GEO) ** 2:
        raise OutsideBall("z must lie in the open unit ball")
    if np.sqrt(r2) < 1e-14:
        return identity(d)
    g = 1.0 / np.sqrt(1.0 - r2)
    M = np.empty((d + 1, d + 1))
    M[0, 0] = g
    M[0, 1:] = -g * z
    M[1:, 0] = -g * z
    M[1:, 1:] = np.eye(d) + (g * g / (1.0 + g)) * np.outer(z, z)
    return ProjectiveMap(M)
