"""Objective functions whose critical points are centroid-matching maps.

Every functional is defined on an open convex set of parameter vectors y
(the hyperplane <x, y> = -1 is the one sent to infinity by phi_y) and
provides exact value, gradient and Hessian there.

* point set   F(y) = w/n * sum log(1 + <p_i, y>),   grad = w * mean phi_y(p_i)
* body        F(y) = w/(d+1) * log vol phi_y(K),      grad = -w * centroid phi_y(K)
* ball        F(y) = -1/2 log(1 - |y|^2) + 1/n sum log(1 + <p_i, y>)

Combinations are signed sums; they are oriented so that a critical point is
exactly a y at which the two mapped centroids coincide.
"""

import numpy as np
from scipy.optimize import minimize

from .errors import EmptyDomain, OutsideDomain, TooFewPoints
from .geometry import Polytope, SimplicialBody, as_points
from .moments import (
    Ellipsoid,
    ellipsoid_slack,
    mapped_body_moments,
    mapped_ellipsoid_moments,
)

TAU_DOM = 1e-12

MIN, MAX = "min", "max"


class Functional:
    """Base class.  Subclasses implement ``slack`` and ``_evaluate``."""

    kind = "Functional"
    sense = MIN

    def __init__(self, dim):
        self.dim = dim

    def slack(self, y):
        raise NotImplementedError

    def in_domain(self, y):
        return self.slack(y) > TAU_DOM

    def _check(self, y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if y.shape != (self.dim,):
            raise ValueError(f"expected a parameter vector of length {self.dim}")
        if not self.slack(y) > TAU_DOM:
            raise OutsideDomain("parameter vector is outside the functional's domain")
        return y

    def evaluate(self, y):
        """Return (value, gradient, Hessian) at y."""
        return self._evaluate(self._check(y))

    def value(self, y):
        return self.evaluate(y)[0]

    def gradient(self, y):
        return self.evaluate(y)[1]

    def hessian(self, y):
        return self.evaluate(y)[2]


class PointSetFunctional(Functional):
    """w/n * sum log(1 + <p_i, y>), strictly concave for a spanning point set."""

    kind = "PointSet"
    sense = MAX

    def __init__(self, points, weight=1.0):
        P = as_points(points)
        super().__init__(P.shape[1])
        self.points = P
        self.weight = float(weight)

    def slack(self, y):
        return float(np.min(1.0 + self.points @ np.atleast_1d(y)))

    def _evaluate(self, y):
        w = 1.0 + self.points @ y
        Z = self.points / w[:, None]          # phi_y(p_i)
        n = len(w)
        val = self.weight * float(np.mean(np.log(w)))
        grad = self.weight * Z.mean(axis=0)
        hess = -self.weight * (Z.T @ Z) / n
        return val, grad, hess


class BodyFunctional(Functional):
    """w/(d+1) * log vol phi_y(K) for a simplicial body or an ellipsoid.

    Gradient is -w times the centroid of phi_y(K); with w = 1 the function is
    strictly convex.
    """

    kind = "Body"
    sense = MIN

    def __init__(self, body, weight=1.0):
        if isinstance(body, Polytope):
            body = body.as_body()
        if not isinstance(body, (SimplicialBody, Ellipsoid)):
            raise TypeError("body must be a SimplicialBody, Polytope or Ellipsoid")
        super().__init__(body.dim)
        self.body = body
        self.weight = float(weight)
        if isinstance(body, SimplicialBody):
            self._vertices = body.points

    def slack(self, y):
        y = np.atleast_1d(y)
        if isinstance(self.body, Ellipsoid):
            return ellipsoid_slack(self.body, y)
        return float(np.min(1.0 + self._vertices @ y))

    def moments(self, y):
        y = self._check(y)
        if isinstance(self.body, Ellipsoid):
            return mapped_ellipsoid_moments(self.body, y)
        return mapped_body_moments(self.body, y)

    def _evaluate(self, y):
        m = self.moments(y)
        d = self.dim
        g = m.centroid
        val = self.weight * np.log(m.volume) / (d + 1)
        grad = -self.weight * g
        hess = self.weight * ((d + 2) * m.normalized_second - (d + 1) * np.outer(g, g))
        return val, grad, hess


class BallFunctional(Functional):
    """-1/2 log(1 - |y|^2) + 1/n sum log(1 + <p_i, y>) for points in the closed ball.

    Up to a constant this is body(unit ball) + point set; its critical point
    gives the ball-fixing map that centers the points.
    """

    kind = "Ball"
    sense = MIN

    def __init__(self, points):
        P = as_points(points)
        if len(P) < 3:
            raise TooFewPoints("the ball functional needs at least 3 points")
        if np.any(np.linalg.norm(P, axis=1) > 1.0 + 1e-12):
            raise OutsideDomain("points must lie in the closed unit ball")
        super().__init__(P.shape[1])
        self.points = P

    def slack(self, y):
        y = np.atleast_1d(y)
        return float(min(1.0 - y @ y, np.min(1.0 + self.points @ y)))

    def _evaluate(self, y):
        s = 1.0 - y @ y
        w = 1.0 + self.points @ y
        Z = self.points / w[:, None]
        n = len(w)
        val = -0.5 * np.log(s) + float(np.mean(np.log(w)))
        grad = y / s + Z.mean(axis=0)
        hess = np.eye(self.dim) / s + 2.0 * np.outer(y, y) / s ** 2 - (Z.T @ Z) / n
        return val, grad, hess


class Combination(Functional):
    """Signed sum of functionals on the intersection of their domains."""

    kind = "Combination"

    def __init__(self, parts, sense=None):
        parts = [(f, float(s)) for f, s in parts]
        if not parts:
            raise ValueError("a combination needs at least one part")
        dims = {f.dim for f, _ in parts}
        if len(dims) != 1:
            raise ValueError("all parts must have the same dimension")
        super().__init__(dims.pop())
        self.parts = parts
        if sense is None:
            f0, s0 = parts[0]
            sense = f0.sense if s0 > 0 else (MIN if f0.sense == MAX else MAX)
        self.sense = sense

    def slack(self, y):
        return min(f.slack(y) for f, _ in self.parts)

    def _evaluate(self, y):
        val, grad, hess = 0.0, np.zeros(self.dim), np.zeros((self.dim, self.dim))
        for f, s in self.parts:
            v, g, h = f._evaluate(y)
            val += s * v
            grad += s * g
            hess += s * h
        return val, grad, hess


def pointset_functional(points, weight=1.0):
    return PointSetFunctional(points, weight)


def body_functional(body, weight=1.0):
    return BodyFunctional(body, weight)


def ball_functional(points):
    return BallFunctional(points)


def combine(parts, sense=None):
    """Signed combination; raises EmptyDomain when the domains do not meet."""
    f = Combination(parts, sense)
    y0 = np.zeros(f.dim)
    if f.slack(y0) <= TAU_DOM:
        res = minimize(lambda y: -f.slack(y), y0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        if -res.fun <= TAU_DOM:
            raise EmptyDomain("the domains of the parts do not intersect")
    return f


# Canonical combinations, one per problem family.  Each is critical exactly
# where the two mapped centroids agree.

def point_vs_points(points, q):
    """Maximize F1(points) - F1({q}); q should be the origin in practice."""
    q = np.atleast_1d(np.asarray(q, dtype=float))
    return combine([(PointSetFunctional(points), 1.0), (PointSetFunctional(q[None, :]), -1.0)])


def points_vs_points(points1, points2):
    return combine([(PointSetFunctional(points1), 1.0), (PointSetFunctional(points2), -1.0)])


def point_vs_body(body):
    """Body functional with the target point translated to the origin."""
    return BodyFunctional(body)


def points_vs_body(body, points):
    """body(K) + F1(points): gradient -gamma(phi K) + gamma(phi points)."""
    return combine([(BodyFunctional(body), 1.0), (PointSetFunctional(points), 1.0)], sense=MIN)


def body_vs_body(outer, inner):
    """body(outer) - body(inner): gradient gamma(phi inner) - gamma(phi outer)."""
    return combine([(BodyFunctional(outer), 1.0), (BodyFunctional(inner), -1.0)], sense=MIN)


def homogeneous_hessian(points, q, Y):
    """Hessian of the homogeneous point-vs-point function on R^{d+1}.

    G(Y) = 1/n sum log <p_i^, Y> - log <q^, Y> is 0-homogeneous; at a critical
    point its Hessian has signature (0, -, ..., -), elsewhere (+, -, ..., -).
    """
    P = np.hstack([np.ones((len(points), 1)), as_points(points)])
    qh = np.concatenate([[1.0], np.atleast_1d(np.asarray(q, dtype=float))])
    Y = np.asarray(Y, dtype=float)
    w = P @ Y
    Z = P / w[:, None]
    zq = qh / (qh @ Y)
    return -(Z.T @ Z) / len(w) + np.outer(zq, zq)
