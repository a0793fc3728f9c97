"""Independent reference computations used by the tests.

None of these call into the package's solvers; they re-derive the quantity
from its definition (sampling, quadrature, closed forms, brute force).
"""

import numpy as np


# ----------------------------------------------------------------------------
# random instances
# ----------------------------------------------------------------------------

def random_polygon(rng, k=None, center=(0.0, 0.0), radius=1.0):
    """Vertices of a random convex polygon (counter-clockwise)."""
    k = k or int(rng.integers(3, 11))
    while True:
        t = np.sort(rng.uniform(0, 2 * np.pi, k))
        gaps = np.diff(np.concatenate([t, [t[0] + 2 * np.pi]]))
        if gaps.max() < np.pi * 0.9:
            break
    r = radius * rng.uniform(0.6, 1.0, k)
    V = np.stack([r * np.cos(t), r * np.sin(t)], axis=1) + np.asarray(center)
    from scipy.spatial import ConvexHull
    return V[ConvexHull(V).vertices]


def random_polytope(rng, d, n=None):
    n = n or int(rng.integers(d + 2, 14))
    return rng.normal(size=(n, d))


def ccw(V):
    c = V.mean(axis=0)
    return V[np.argsort(np.arctan2(V[:, 1] - c[1], V[:, 0] - c[0]))]


def polygon_facets(V):
    """Unit outward normals and offsets of a ccw convex polygon."""
    V = ccw(V)
    E = np.roll(V, -1, axis=0) - V
    N = np.stack([E[:, 1], -E[:, 0]], axis=1)
    N /= np.linalg.norm(N, axis=1)[:, None]
    return N, np.einsum("ij,ij->i", N, V)


def shoelace(P):
    x, y = P[:, 0], P[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def polygon_centroid(P):
    x, y = P[:, 0], P[:, 1]
    cr = x * np.roll(y, -1) - np.roll(x, -1) * y
    A = 0.5 * cr.sum()
    cx = np.sum((x + np.roll(x, -1)) * cr) / (6 * A)
    cy = np.sum((y + np.roll(y, -1)) * cr) / (6 * A)
    return np.array([cx, cy])


# ----------------------------------------------------------------------------
# Santaló point by volume minimization
# ----------------------------------------------------------------------------

def polar_area(N, b, y):
    """Area of the polar polygon about y (complex-step friendly)."""
    W = N / (b - N @ y)[:, None]
    return shoelace(W)


def santalo_by_volume(V):
    """argmin_y area(polar about y) with complex-step gradients and Newton polish."""
    N, b = polygon_facets(V)
    h = 1e-30

    def f(y):
        return float(np.real(polar_area(N, b, y)))

    def g(y):
        out = np.empty(2)
        for i in range(2):
            e = np.zeros(2, dtype=complex)
            e[i] = 1j * h
            out[i] = np.imag(polar_area(N, b, y + e)) / h
        return out

    def hess(y):
        H = np.empty((2, 2))
        for j in range(2):
            e = np.zeros(2)
            e[j] = 1e-6
            H[:, j] = (g(y + e) - g(y - e)) / 2e-6
        return 0.5 * (H + H.T)

    # damped Newton on a strictly convex function, kept inside the polygon
    y = V.mean(axis=0)
    for _ in range(200):
        gy = g(y)
        if np.linalg.norm(gy) < 1e-13:
            break
        step = -np.linalg.solve(hess(y), gy)
        t = 1.0
        while np.any(b - N @ (y + t * step) <= 0) or f(y + t * step) > f(y) + 1e-4 * t * gy @ step:
            t *= 0.5
            if t < 1e-12:
                break
        y = y + t * step
    return y


# ----------------------------------------------------------------------------
# Monte Carlo centroids
# ----------------------------------------------------------------------------

def mc_mapped_centroid(simplices, y, n, rng):
    """Centroid of phi_y(K) by rejection sampling; returns (mean, standard error)."""
    S = np.asarray(simplices, dtype=float)
    d = S.shape[2]
    V = S.reshape(-1, d)
    W = V / (1 + V @ y)[:, None]
    lo, hi = W.min(axis=0), W.max(axis=0)
    X = lo + (hi - lo) * rng.random((n, d))
    Pre = X / (1 - X @ y)[:, None]       # inverse of phi_y
    ok_den = (1 - X @ y) > 0
    inside = np.zeros(n, dtype=bool)
    for T in S:
        A = np.vstack([(T[1:] - T[0]).T])
        lam = np.linalg.solve(A, (Pre - T[0]).T).T
        inside |= np.all(lam >= 0, axis=1) & (lam.sum(axis=1) <= 1)
    Z = X[inside & ok_den]
    return Z.mean(axis=0), Z.std(axis=0, ddof=1) / np.sqrt(len(Z))


def mc_ball_image_centroid(y, n, rng):
    """Centroid of phi_y(B^d) by rejection sampling in image space."""
    d = len(y)
    S = rng.normal(size=(4096, d))
    S /= np.linalg.norm(S, axis=1)[:, None]
    W = S / (1 + S @ y)[:, None]
    lo, hi = W.min(axis=0) - 0.05, W.max(axis=0) + 0.05
    X = lo + (hi - lo) * rng.random((n, d))
    den = 1 - X @ y
    Pre = X / den[:, None]
    Z = X[(den > 0) & (np.einsum("ij,ij->i", Pre, Pre) <= 1)]
    return Z.mean(axis=0)


# ----------------------------------------------------------------------------
# Hilbert width straight from the definition (d = 2)
# ----------------------------------------------------------------------------

def _pencil_distance(a1, a2, b2, b1, diff):
    """1/2 log of the cross ratio of four pencil elements ordered a1<a2<b2<b1."""
    num = diff(b2, a1) * diff(b1, a2)
    den = diff(a2, a1) * diff(b1, b2)
    return 0.5 * np.log(num / den)


def _angles_from(V, alpha):
    D = V - alpha
    keep = np.linalg.norm(D, axis=1) > 1e-12
    D = D[keep]
    ref = np.arctan2(*D.mean(axis=0)[::-1])
    ang = np.arctan2(D[:, 1], D[:, 0])
    rel = (ang - ref + np.pi) % (2 * np.pi) - np.pi
    return ref + rel.min(), ref + rel.max()


def width_at_point(V1, V2, alpha):
    A1, B1 = _angles_from(V1, alpha)
    A2, B2 = _angles_from(V2, alpha)
    return _pencil_distance(A1, A2, B2, B1, lambda s, t: np.sin(s - t))


def width_at_infinity(V1, V2, v):
    n = np.array([-v[1], v[0]])
    o1, o2 = V1 @ n, V2 @ n
    return _pencil_distance(o1.min(), o2.min(), o2.max(), o1.max(), lambda s, t: s - t)


def direct_width(V1, V2, rng, n_samples=2000):
    """Max over alpha outside K1 of the support-line cross-ratio distance.

    Candidates: every intersection of two edge lines of K1 (parallel pairs
    give alpha at infinity), plus random finite and infinite alpha.
    """
    V1 = ccw(V1)
    N, b = polygon_facets(V1)
    best = -np.inf
    m = len(N)
    for i in range(m):
        for j in range(i + 1, m):
            M = np.array([N[i], N[j]])
            if abs(np.linalg.det(M)) < 1e-13:
                v = np.array([-N[i][1], N[i][0]])
                best = max(best, width_at_infinity(V1, V2, v))
            else:
                best = max(best, width_at_point(V1, V2, np.linalg.solve(M, [b[i], b[j]])))
    c = V1.mean(axis=0)
    for _ in range(n_samples):
        t = rng.uniform(0, 2 * np.pi)
        u = np.array([np.cos(t), np.sin(t)])
        if rng.random() < 0.2:
            best = max(best, width_at_infinity(V1, V2, u))
            continue
        r_out = np.max((V1 - c) @ u)
        alpha = c + u * r_out * (1 + rng.exponential(1.0) + 1e-6)
        if np.all(N @ alpha - b <= 0):
            continue
        best = max(best, width_at_point(V1, V2, alpha))
    return best


# ----------------------------------------------------------------------------
# 1-D quadrature for the cusp family
# ----------------------------------------------------------------------------

def cusp_centroid_x(a, exponent=3):
    """x-centroid of phi_{a,0}(K) for K = {|y| <= (1-x)^k, -1 <= x <= 1}."""
    from scipy.integrate import quad
    area = quad(lambda x: 2 * (1 - x) ** exponent / (1 + a * x) ** 3, -1, 1, limit=400)[0]
    mom = quad(lambda x: 2 * (1 - x) ** exponent * x / (1 + a * x) ** 4, -1, 1, limit=400)[0]
    return mom / area


def cusp_body(n=401, exponent=3):
    from projcentroid.cli import region_body
    x = np.linspace(-1, 1, n)
    up = (1 - x) ** exponent
    return region_body(x, -up, up)


def trapezoid_centroid_y(h):
    """Centroid height of the image of |y| <= h under the disk map of velocity 1/sqrt(3)."""
    s3 = np.sqrt(3)
    yt, yb = (s3 * h + 1) / (h + s3), (1 - s3 * h) / (s3 - h)
    wt, wb = 1 / (h + s3), 1 / (s3 - h)
    return yb + (yt - yb) * (wb + 2 * wt) / (3 * (wb + wt))


# ----------------------------------------------------------------------------
# finite differences
# ----------------------------------------------------------------------------

def fd_gradient(f, y, h=1e-6):
    g = np.zeros_like(y)
    for i in range(len(y)):
        e = np.zeros_like(y)
        e[i] = h
        g[i] = (f.value(y + e) - f.value(y - e)) / (2 * h)
    return g


def fd_hessian(f, y, h=1e-6):
    d = len(y)
    H = np.zeros((d, d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        H[:, i] = (f.gradient(y + e) - f.gradient(y - e)) / (2 * h)
    return H


def rel_err(a, b):
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-12))


# ----------------------------------------------------------------------------
# conformal barycenter in the Klein model
# ----------------------------------------------------------------------------

def klein_boost(z, X):
    """Hyperbolic translation of the Klein ball moving z to the origin."""
    z = np.asarray(z, dtype=float)
    r2 = z @ z
    if r2 < 1e-28:
        return np.array(X, dtype=float)
    g = 1 / np.sqrt(1 - r2)
    u = z / np.sqrt(r2)
    X = np.asarray(X, dtype=float)
    par = X @ u
    perp = X - np.outer(par, u)
    den = g * (1 - X @ z)
    new_par = g * (par - np.sqrt(r2)) / den
    return np.outer(new_par, u) + perp / den[:, None]


def klein_barycenter(P, grid=121):
    """z with sum klein_boost(z, P) = 0, by grid search then fsolve (d = 2)."""
    from scipy.optimize import fsolve
    P = np.asarray(P, dtype=float)
    t = np.linspace(-0.99, 0.99, grid)
    best, zbest = np.inf, None
    for a in t:
        for b in t:
            z = np.array([a, b])
            if z @ z >= 0.98:
                continue
            v = np.linalg.norm(klein_boost(z, P).sum(axis=0))
            if v < best:
                best, zbest = v, z
    sol = fsolve(lambda z: klein_boost(z, P).sum(axis=0), zbest, xtol=1e-14)
    return sol, klein_boost(sol, P)
