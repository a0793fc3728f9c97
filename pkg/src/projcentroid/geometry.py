"""Core geometric types: simplices, polytopes in vertex/facet form, simplicial
bodies, convex hulls with a pulling triangulation, polar duals, the
cross-ratio and line/boundary intersection.

Predicates use an absolute tolerance ``TAU_GEO`` after rescaling the input to
the unit coordinate box, so the tolerance is independent of the input scale.
"""

import itertools
from dataclasses import dataclass
from math import comb, factorial

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .errors import (
    CenterOutside,
    CoincidentPoints,
    DegenerateBody,
    DegenerateInput,
    DegenerateSimplex,
    DivisionByZero,
    PointOutside,
)

TAU_GEO = 1e-9

# Above this many d-subsets the hull falls back to qhull.
_BRUTE_FORCE_LIMIT = 200_000
_CHUNK = 20_000
# Pairwise disjointness of simplicial bodies is only checked up to this size.
_MAX_VALIDATED_SIMPLICES = 2000


def as_points(points, dim=None):
    """Return ``points`` as a finite float array of shape (n, d)."""
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P.reshape(-1, 1) if dim in (None, 1) else P.reshape(1, -1)
    if P.ndim != 2 or P.shape[0] == 0:
        raise DegenerateInput("expected a non-empty list of points")
    if not np.all(np.isfinite(P)):
        raise DegenerateInput("point coordinates must be finite")
    if dim is not None and P.shape[1] != dim:
        raise DegenerateInput(f"expected points of dimension {dim}, got {P.shape[1]}")
    return P


def lift(x):
    """Homogeneous lift x -> (1, x); works on a point or an (n, d) array."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return np.concatenate([[1.0], x])
    return np.hstack([np.ones((x.shape[0], 1)), x])


def _frame(P):
    """Center and scale mapping the bounding box of P onto [-1, 1]^d."""
    lo, hi = P.min(axis=0), P.max(axis=0)
    center = 0.5 * (lo + hi)
    scale = 0.5 * float(np.max(hi - lo))
    if scale <= 0.0:
        scale = 1.0
    return center, scale


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


# ----------------------------------------------------------------------------
# Simplices and simplicial bodies
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Simplex:
    """A d-simplex given by its d+1 vertices (rows)."""

    vertices: np.ndarray

    def __post_init__(self):
        V = as_points(self.vertices)
        d = V.shape[1]
        if V.shape[0] != d + 1:
            raise DegenerateSimplex(f"a {d}-simplex needs {d + 1} vertices")
        object.__setattr__(self, "vertices", V.copy())
        _freeze(self.vertices)
        if not simplex_volumes(V[None])[0] > 0.0:
            raise DegenerateSimplex("simplex has zero volume")

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def volume(self):
        return float(simplex_volumes(self.vertices[None])[0])


def simplex_volumes(S):
    """Unsigned volumes of a stack of simplices with shape (k, d+1, d)."""
    S = np.asarray(S, dtype=float)
    d = S.shape[2]
    E = S[:, 1:, :] - S[:, :1, :]
    return np.abs(np.linalg.det(E)) / factorial(d)


def _barycentric_facets(S):
    """Unit-normalized inequalities g.x <= h describing each simplex.

    Returns (G, h) with shapes (k, d+1, d) and (k, d+1); facet j is opposite
    vertex j and the simplex is {x : G[j] x <= h[j] for all j}.
    """
    k, m, d = S.shape
    T = np.transpose(S[:, 1:, :] - S[:, :1, :], (0, 2, 1))  # columns v_j - v_0
    Tinv = np.linalg.inv(T)                                  # lambda_{1..d} = Tinv (x - v0)
    grads = np.empty((k, m, d))
    grads[:, 1:, :] = Tinv
    grads[:, 0, :] = -Tinv.sum(axis=1)
    consts = np.empty((k, m))
    consts[:, 1:] = -np.einsum("kij,kj->ki", Tinv, S[:, 0, :])
    consts[:, 0] = 1.0 - consts[:, 1:].sum(axis=1)
    # lambda_j(x) = grads_j . x + consts_j >= 0  <=>  -grads_j . x <= consts_j
    norms = np.linalg.norm(grads, axis=2)
    return -grads / norms[..., None], consts / norms


def _interiors_overlap(S1, S2, tol):
    """LP test: do the interiors of two simplices intersect?"""
    d = S1.shape[1]
    G1, h1 = _barycentric_facets(S1[None])
    G2, h2 = _barycentric_facets(S2[None])
    G = np.vstack([G1[0], G2[0]])
    h = np.concatenate([h1[0], h2[0]])
    # maximize t subject to G x + t <= h
    A = np.hstack([G, np.ones((G.shape[0], 1))])
    c = np.zeros(d + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=A, b_ub=h, bounds=[(None, None)] * d + [(None, 1.0)], method="highs")
    return res.status == 0 and -res.fun > tol


def check_disjoint_interiors(S, tol=TAU_GEO):
    """Raise DegenerateBody if two simplices of the stack overlap in their interiors."""
    k, m, d = S.shape
    if k < 2:
        return
    G, h = _barycentric_facets(S)
    scale = max(1.0, float(np.abs(S).max()))
    t = tol * scale
    for start in range(0, k, 64):
        idx = np.arange(start, min(k, start + 64))
        # vals[a, f, b, v]: facet f of simplex a evaluated at vertex v of simplex b
        vals = np.einsum("afd,bvd->afbv", G[idx], S) - h[idx][:, :, None, None]
        sep_ab = (vals >= -t).all(axis=3).any(axis=1)                # (len(idx), k)
        # vals_t[a, b, f, v]: facet f of simplex b at vertex v of simplex a
        vals_t = np.einsum("bfd,avd->abfv", G, S[idx]) - h[None, :, :, None]
        sep_ba = (vals_t >= -t).all(axis=3).any(axis=2)              # (len(idx), k)
        separated = sep_ab | sep_ba
        for ai, a in enumerate(idx):
            for b in np.flatnonzero(~separated[ai]):
                if b <= a:
                    continue
                if _interiors_overlap(S[a], S[b], t):
                    raise DegenerateBody(f"simplices {a} and {b} overlap")


@dataclass(frozen=True, eq=False)
class SimplicialBody:
    """A finite union of d-simplices with pairwise disjoint interiors.

    ``simplices`` has shape (k, d+1, d).  The body may be non-convex.
    """

    simplices: np.ndarray
    validate: bool = True

    def __post_init__(self):
        S = np.asarray(self.simplices, dtype=float)
        if S.ndim != 3 or S.shape[0] == 0 or S.shape[1] != S.shape[2] + 1:
            raise DegenerateBody("simplices must have shape (k, d+1, d)")
        if not np.all(np.isfinite(S)):
            raise DegenerateBody("simplex coordinates must be finite")
        S = S.copy()
        object.__setattr__(self, "simplices", S)
        _freeze(S)
        vols = simplex_volumes(S)
        edges = np.linalg.norm(S[:, :, None, :] - S[:, None, :, :], axis=3).max(axis=(1, 2))
        if np.any(vols <= 1e-12 * edges ** S.shape[2]):
            raise DegenerateBody("body contains a degenerate simplex")
        if self.validate and S.shape[0] <= _MAX_VALIDATED_SIMPLICES:
            check_disjoint_interiors(S)

    @property
    def dim(self):
        return self.simplices.shape[2]

    @property
    def volume(self):
        return float(simplex_volumes(self.simplices).sum())

    @property
    def points(self):
        """All distinct simplex vertices."""
        return np.unique(self.simplices.reshape(-1, self.dim), axis=0)

    def hull(self):
        return convex_hull(self.points)

    @classmethod
    def from_polygon(cls, boundary, validate=True):
        """Ear-clipping triangulation of a simple polygon.

        ``boundary`` lists the vertices in cyclic order (either orientation).
        """
        B = as_points(boundary, 2)
        return cls(B[_ear_clip(B)], validate=validate)


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _ear_clip(B):
    """Triangle index triples of a simple polygon, O(n^2) ear clipping."""
    n = len(B)
    if n < 3:
        raise DegenerateBody("a polygon needs at least 3 vertices")
    x, y = B[:, 0], B[:, 1]
    area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if abs(area2) <= 0:
        raise DegenerateBody("polygon has zero area")
    idx = list(range(n)) if area2 > 0 else list(range(n - 1, -1, -1))
    scale = _frame(B)[1] ** 2
    tris = []
    while len(idx) > 3:
        m = len(idx)
        for k in range(m):
            i, j, l = idx[k - 1], idx[k], idx[(k + 1) % m]
            if _cross2(B[i], B[j], B[l]) <= 1e-14 * scale:
                continue                       # reflex or flat corner
            ear = True
            for r in idx:
                if r in (i, j, l):
                    continue
                p = B[r]
                if (_cross2(B[i], B[j], p) >= 0 and _cross2(B[j], B[l], p) >= 0
                        and _cross2(B[l], B[i], p) >= 0):
                    ear = False
                    break
            if ear:
                tris.append((i, j, l))
                idx.pop(k)
                break
        else:
            raise DegenerateBody("polygon is not simple")
    tris.append(tuple(idx))
    return np.array(tris)


# ----------------------------------------------------------------------------
# Convex hulls
# ----------------------------------------------------------------------------

def _dedupe_hyperplanes(A, b, tol):
    if len(A) == 0:
        return A, b
    H = np.hstack([A, b[:, None]])
    _, first = np.unique(np.round(H / (10 * tol)), axis=0, return_index=True)
    H = H[np.sort(first)]
    keep = []
    for i, h in enumerate(H):
        if not keep or np.min(np.max(np.abs(H[keep] - h), axis=1)) > 1e3 * tol:
            keep.append(i)
    H = H[keep]
    return H[:, :-1], H[:, -1]


def _facets_brute_force(X, tol):
    n, k = X.shape
    combos = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), k)),
        dtype=np.intp,
    ).reshape(-1, k)
    As, bs = [], []
    for start in range(0, len(combos), _CHUNK):
        idx = combos[start:start + _CHUNK]
        M = np.concatenate([X[idx], np.ones((len(idx), k, 1))], axis=2)
        _, sv, vt = np.linalg.svd(M)
        h = vt[:, -1, :]
        a, c0 = h[:, :k], h[:, k]
        na = np.linalg.norm(a, axis=1)
        ok = (sv[:, -1] > 1e-12) & (na > 1e-12)
        a, c0 = a[ok] / na[ok, None], c0[ok] / na[ok]
        vals = X @ a.T + c0
        upper = np.all(vals <= tol, axis=0)
        lower = np.all(vals >= -tol, axis=0)
        As += [a[upper], -a[lower & ~upper]]
        bs += [-c0[upper], c0[lower & ~upper]]
    return np.vstack(As), np.concatenate(bs)


def _facets_qhull(X, tol):
    eq = ConvexHull(X).equations
    return eq[:, :-1].copy(), -eq[:, -1]


def _facet_hyperplanes(X, tol):
    """Facet inequalities a.x <= b (unit a) of conv X for a full-dimensional X."""
    n, k = X.shape
    if k == 1:
        return np.array([[-1.0], [1.0]]), np.array([-X[:, 0].min(), X[:, 0].max()])
    if comb(n, k) <= _BRUTE_FORCE_LIMIT:
        A, b = _facets_brute_force(X, tol)
    else:
        A, b = _facets_qhull(X, tol)
    A, b = _dedupe_hyperplanes(A, b, tol)
    # a facet must contain k affinely independent points
    keep = []
    for i in range(len(A)):
        on = X[np.abs(X @ A[i] - b[i]) <= tol]
        if len(on) >= k and np.linalg.matrix_rank(on[1:] - on[0], tol=1e-9) == k - 1:
            keep.append(i)
    return A[keep], b[keep]


def _pulling_triangulation(X, idx, tol, facets=None):
    """Pulling triangulation of the full-dimensional polytope with vertex rows X.

    All rows of X must be extreme points; row 0 is the pulled vertex.  Facets
    not containing it are triangulated recursively in their own coordinates.
    """
    m, k = X.shape
    if m == k + 1:
        return [list(idx)]
    A, b = facets if facets is not None else _facet_hyperplanes(X, tol)
    out = []
    for a, beta in zip(A, b):
        on = np.flatnonzero(np.abs(X @ a - beta) <= tol)
        if on[0] == 0:
            continue
        basis = null_space(a[None, :])
        Y = (X[on] - X[on[0]]) @ basis
        for s in _pulling_triangulation(Y, [idx[j] for j in on], tol):
            out.append([idx[0]] + s)
    return out


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex polytope with vertices, facet inequalities normals @ x <= offsets
    (unit normals) and a triangulation given as vertex-index simplices."""

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    triangulation: np.ndarray

    def __post_init__(self):
        _freeze(self.vertices, self.normals, self.offsets, self.triangulation)

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def facets(self):
        return list(zip(self.normals, self.offsets))

    @property
    def simplices(self):
        return self.vertices[self.triangulation]

    @property
    def volume(self):
        return float(simplex_volumes(self.simplices).sum())

    @property
    def scale(self):
        return _frame(self.vertices)[1]

    def slacks(self, x):
        """Facet slacks b - A x (last axis indexes facets)."""
        x = np.asarray(x, dtype=float)
        return self.offsets - x @ self.normals.T

    def contains(self, x, strict=True):
        s = self.slacks(x).min(axis=-1) / self.scale
        return s > TAU_GEO if strict else s >= -TAU_GEO

    def as_body(self):
        return SimplicialBody(self.simplices, validate=False)


def convex_hull(points):
    """Convex hull of a full-dimensional point set.

    Returns a Polytope whose vertices are the extreme points in lexicographic
    order, with unit facet normals and a pulling triangulation from vertex 0.
    """
    P = as_points(points)
    n, d = P.shape
    center, scale = _frame(P)
    X = (P - center) / scale
    if n < d + 1 or np.linalg.matrix_rank(X - X.mean(axis=0), tol=TAU_GEO) < d:
        raise DegenerateInput("points do not affinely span the space")
    _, first = np.unique(np.round(X / TAU_GEO), axis=0, return_index=True)
    X = X[np.sort(first)]
    A, b = _facet_hyperplanes(X, TAU_GEO)
    active = np.abs(X @ A.T - b) <= TAU_GEO
    is_vertex = np.array([
        np.linalg.matrix_rank(A[row], tol=1e-9) == d if row.sum() >= d else False
        for row in active
    ])
    V = X[is_vertex]
    order = np.lexsort(((V * scale + center).T)[::-1])
    V = V[order]
    tri = np.array(_pulling_triangulation(V, list(range(len(V))), TAU_GEO, (A, b)), dtype=np.intp)
    return Polytope(
        vertices=V * scale + center,
        normals=A,
        offsets=b * scale + A @ center,
        triangulation=tri,
    )


def polar_dual(P, center=None):
    """Polar body {z : <x - c, z - c> >= -1 for all x in P} about ``center``.

    Dual vertices are found by brute force over d-subsets of the dual facet
    hyperplanes (one per vertex of P) with a feasibility filter.
    """
    d = P.dim
    c = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    if np.min(P.slacks(c)) / P.scale <= TAU_GEO:
        raise CenterOutside("polar center must lie strictly inside the polytope")
    # in shifted coordinates z' = z - c the constraints are <-(v - c), z'> <= 1
    G = -(P.vertices - c)
    m = len(G)
    combos = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(m), d)),
        dtype=np.intp,
    ).reshape(-1, d)
    found = []
    gmax = float(np.abs(G).max())
    for start in range(0, len(combos), _CHUNK):
        idx = combos[start:start + _CHUNK]
        M = G[idx]
        dets = np.linalg.det(M)
        ok = np.abs(dets) > 1e-12 * gmax ** d
        if not np.any(ok):
            continue
        Z = np.linalg.solve(M[ok], np.ones((int(ok.sum()), d, 1)))[..., 0]
        feas = np.all(Z @ G.T <= 1.0 + 1e-9 * np.maximum(1.0, np.abs(Z).max(axis=1))[:, None], axis=1)
        found.append(Z[feas])
    Z = np.vstack(found)
    return convex_hull(Z + c)


def cross_ratio(p, q, a, b):
    """Cross-ratio ((p-a)(q-b)) / ((p-b)(q-a)) of four scalars on a line."""
    den = (p - b) * (q - a)
    if den == 0:
        raise DivisionByZero("cross-ratio undefined: p = b or q = a")
    return (p - a) * (q - b) / den


def _chord_polytope(P, p, u):
    """Parameters t_lo < 0 < t_hi where p + t u leaves P."""
    au = P.normals @ u
    slack = P.offsets - P.normals @ p
    with np.errstate(divide="ignore"):
        t = slack / au
    t_hi = np.min(t[au > 0], initial=np.inf)
    t_lo = np.max(t[au < 0], initial=-np.inf)
    return t_lo, t_hi


def line_boundary_points(P, p, q):
    """Intersections a, b of line pq with the boundary, ordered a, p, q, b."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if not (P.contains(p) and P.contains(q)):
        raise PointOutside("p and q must be strictly inside the polytope")
    u = q - p
    if np.linalg.norm(u) <= TAU_GEO * P.scale:
        raise CoincidentPoints("p and q coincide")
    t_lo, t_hi = _chord_polytope(P, p, u)
    return p + t_lo * u, p + t_hi * u
