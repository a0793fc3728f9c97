"""Polarity with respect to a union of hyperplanes, and counting the classes
of (possibly non-admissible) projective maps that make q the centroid of
p_1, ..., p_n.

A covector rho in the dual projective plane picks the hyperplane {rho = 0}
sent to infinity.  The lines ker p^_i cut the dual plane into chambers; every
chamber avoiding ker q^ carries exactly one class of solutions.
"""

import itertools

import numpy as np

from .centering import fit_point_to_points
from .errors import AtInfinity, NotGeneralPosition, OnArrangement, UnsupportedDimension
from .geometry import as_points, convex_hull, lift
from .projective import ProjectiveMap, apply, compose

_PROBE = 1e-7


def polar_point(points, rho):
    """Point that becomes the centroid of the points when {rho = 0} goes to infinity.

    It is the dehomogenization of sum p^_i / rho(p^_i).
    """
    P = lift(as_points(points))
    rho = np.asarray(rho, dtype=float)
    vals = P @ rho
    if np.any(np.abs(vals) <= 1e-12 * np.linalg.norm(rho) * np.linalg.norm(P, axis=1)):
        raise OnArrangement("rho vanishes at one of the points")
    m = (P / vals[:, None]).sum(axis=0)
    if abs(m[0]) <= 1e-14 * np.linalg.norm(m):
        raise AtInfinity("the polar point lies at infinity")
    return m[1:] / m[0]


def map_sending_to_infinity(rho):
    """A projective map whose denominator row is rho (kernel sent to infinity)."""
    rho = np.asarray(rho, dtype=float)
    rho = rho / np.linalg.norm(rho)
    _, _, vt = np.linalg.svd(rho[None, :])
    return ProjectiveMap(np.vstack([rho, vt[1:]]))


def _check_general_position(P):
    """Every d+1 of the lifted points must be linearly independent."""
    H = lift(P)
    H = H / np.linalg.norm(H, axis=1)[:, None]
    k = H.shape[1]
    for idx in itertools.combinations(range(len(H)), k):
        if abs(np.linalg.det(H[list(idx)])) <= 1e-9:
            raise NotGeneralPosition("points are not in general position")


def _normalized_signs(S):
    """Sign vectors modulo global sign (first entry made positive)."""
    S = np.where(S[:, :1] < 0, -S, S)
    return S.astype(np.int8)


def _chamber_probes(H):
    """Covectors next to every vertex of the arrangement, one per adjacent chamber."""
    out = []
    for i, j in itertools.combinations(range(len(H)), 2):
        v = np.cross(H[i], H[j])
        v /= np.linalg.norm(v)
        G = H[[i, j]]
        pinv = np.linalg.pinv(G)
        for s in itertools.product((-1.0, 1.0), repeat=2):
            out.append(v + _PROBE * (pinv @ np.array(s)))
    return np.array(out)


def chambers(points, n_samples=200_000, seed=0):
    """Chambers of the arrangement {ker p^_i} in the dual projective plane.

    Returns a dict sign-vector -> representative covector.  Sampling is
    complemented by probes next to every vertex so the enumeration is exact
    in general position.
    """
    H = lift(as_points(points, 2))
    H = H / np.linalg.norm(H, axis=1)[:, None]
    rng = np.random.default_rng(seed)
    R = np.vstack([rng.normal(size=(n_samples, 3)), _chamber_probes(H)])
    vals = R @ H.T
    # discard covectors too close to a line to have a reliable sign
    ok = np.all(np.abs(vals) > 1e-12 * np.linalg.norm(R, axis=1)[:, None], axis=1)
    R, vals = R[ok], vals[ok]
    S = _normalized_signs(np.sign(vals))
    R = np.where(np.sign(vals[:, :1]) < 0, -R, R)
    keys, first = np.unique(S, axis=0, return_index=True)
    return {tuple(k): R[i] for k, i in zip(keys, first)}


def chambers_met_by(points, q):
    """Sign vectors of the chambers crossed by the line ker q^."""
    H = lift(as_points(points, 2))
    qh = lift(np.asarray(q, dtype=float))
    _, _, vt = np.linalg.svd(qh[None, :])
    b1, b2 = vt[1], vt[2]
    # rho(t) = cos t b1 + sin t b2 vanishes on ker p^_i at t_i
    t = np.sort(np.mod(np.arctan2(-(H @ b1), H @ b2), np.pi))
    mids = 0.5 * (t + np.roll(t, -1))
    mids[-1] = 0.5 * (t[-1] + t[0] + np.pi)
    R = np.cos(mids)[:, None] * b1 + np.sin(mids)[:, None] * b2
    S = _normalized_signs(np.sign(R @ H.T))
    return {tuple(s) for s in S}


def count_centering_classes(points, q, n_samples=200_000, seed=0):
    """Number of classes of projective maps phi (modulo affine maps) with
    mean phi(p_i) = phi(q), counted as chambers not met by ker q^ (d = 2)."""
    P = as_points(points)
    if P.shape[1] != 2:
        raise UnsupportedDimension("class counting is implemented for d = 2 only")
    q = np.atleast_1d(np.asarray(q, dtype=float))
    _check_general_position(np.vstack([P, q]))
    all_chambers = chambers(P, n_samples, seed)
    met = chambers_met_by(P, q)
    return sum(1 for key in all_chambers if key not in met)


def admissible_chambers(points, q, n_samples=200_000, seed=0):
    """Representative covectors of the chambers carrying a solution."""
    P = as_points(points, 2)
    met = chambers_met_by(P, q)
    return [rho for key, rho in chambers(P, n_samples, seed).items() if key not in met]


def solve_in_chamber(points, q, rho, **kwargs):
    """The solution class for the chamber of rho, as a map of the original plane.

    Sends {rho = 0} to infinity first, then solves the admissible problem for
    the images (q's image lies inside the images' hull for these chambers).
    """
    P = as_points(points)
    psi = map_sending_to_infinity(rho)
    res = fit_point_to_points(apply(psi, P), apply(psi, np.asarray(q, dtype=float)), **kwargs)
    return [compose(psi, m) for m in res.maps], res
