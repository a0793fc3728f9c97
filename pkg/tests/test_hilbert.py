import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import direct_width, random_polygon
from projcentroid.centering import fit_body_to_body
from projcentroid.errors import ContainmentViolated, PointOutside
from projcentroid.geometry import convex_hull
from projcentroid.hilbert import (
    hilbert_diameter, hilbert_distance, hilbert_width, kappa, make_certificate, ratio_bound,
)
from projcentroid.moments import Ellipsoid
from projcentroid.projective import ProjectiveMap, apply, is_admissible

seeds = st.integers(0, 2**31 - 1)
SEGMENT = convex_hull([[-1.0], [1.0]])
SQUARE = convex_hull([[1, 1], [-1, 1], [-1, -1], [1, -1]])


def ngon(n, r=1.0):
    t = 2 * np.pi * np.arange(n) / n
    return r * np.stack([np.cos(t), np.sin(t)], axis=1)


def random_interior(rng, V, k):
    W = rng.dirichlet(np.ones(len(V)), size=k)
    return W @ V


def nested_pair(rng):
    V1 = random_polygon(rng)
    c = random_interior(rng, V1, 1)[0]
    V2 = c + rng.uniform(0.1, 0.5) * random_polygon(rng, radius=0.6)
    K1 = convex_hull(V1)
    if not np.all(K1.contains(V2)):
        return None
    return V1, V2


# ----------------------------------------------------------------------------
# distances
# ----------------------------------------------------------------------------

def test_segment_distance():
    assert hilbert_distance(SEGMENT, [0.0], [0.5]) == pytest.approx(0.5 * np.log(3))
    assert hilbert_distance(SEGMENT, [0.3], [0.3]) == 0.0
    with pytest.raises(PointOutside):
        hilbert_distance(SEGMENT, [0.0], [1.0])


def test_disk_distance_is_klein_distance():
    disk = convex_hull(ngon(720))
    for t in (0.1, 0.5, 0.9):
        ref = 0.5 * np.log((1 + t) / (1 - t))
        assert hilbert_distance(disk, [0, 0], [t, 0]) == pytest.approx(ref, abs=1e-4)
        assert hilbert_distance(Ellipsoid.ball(2), [0, 0], [t, 0]) == pytest.approx(ref, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_metric_axioms(seed):
    rng = np.random.default_rng(seed)
    V = random_polygon(rng)
    K = convex_hull(V)
    p, q, r = random_interior(rng, V, 3)
    dpq = hilbert_distance(K, p, q)
    assert dpq == pytest.approx(hilbert_distance(K, q, p), rel=1e-12)
    assert dpq > 0
    assert dpq <= hilbert_distance(K, p, r) + hilbert_distance(K, r, q) + 1e-10


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_projective_invariance(seed):
    rng = np.random.default_rng(seed)
    V = random_polygon(rng)
    K = convex_hull(V)
    M = np.eye(3) + 0.3 * rng.normal(size=(3, 3))
    m = ProjectiveMap(M)
    if not is_admissible(m, K) or abs(np.linalg.det(M)) < 0.1:
        return
    p, q = random_interior(rng, V, 2)
    mK = convex_hull(apply(m, V))
    d0 = hilbert_distance(K, p, q)
    assert hilbert_distance(mK, apply(m, p), apply(m, q)) == pytest.approx(d0, abs=1e-8)


# ----------------------------------------------------------------------------
# diameters and widths
# ----------------------------------------------------------------------------

def test_concentric_balls():
    for r in (0.2, 0.5, 0.8):
        ref = np.log((1 + r) / (1 - r))
        B, b = Ellipsoid.ball(2), Ellipsoid.ball(2, r)
        assert hilbert_diameter(B, b) == pytest.approx(ref, abs=1e-8)
        assert hilbert_width(B, b) == pytest.approx(ref, abs=1e-8)


def test_diameter_examples():
    assert hilbert_diameter(SQUARE, np.array([[0.1, 0.2]])) == 0.0
    inner = convex_hull([[-0.5], [0.5]])
    assert hilbert_diameter(SEGMENT, inner) == pytest.approx(np.log(3))
    with pytest.raises(ContainmentViolated):
        hilbert_diameter(SEGMENT, convex_hull([[-0.5], [1.5]]))


def test_diameter_against_dense_sampling():
    rng = np.random.default_rng(1)
    V1 = random_polygon(rng)
    V2 = 0.3 * random_polygon(rng, radius=0.5) + random_interior(rng, V1, 1)[0] * 0.3
    K1, K2 = convex_hull(V1), convex_hull(V2)
    P = random_interior(rng, V2, 300)
    sampled = max(hilbert_distance(K1, P[i], P[j]) for i in range(0, 300, 3) for j in range(1, 300, 3))
    assert sampled <= hilbert_diameter(K1, K2) + 1e-12


def test_shrinking_width_vanishes():
    c = np.array([0.1, -0.2])
    widths = [hilbert_width(SQUARE, convex_hull(c + s * (SQUARE.vertices - c)))
              for s in (0.5, 0.1, 0.01)]
    assert widths[0] > widths[1] > widths[2] and widths[2] < 0.05


def test_diamond_vs_box_width():
    diamond = convex_hull([[1, 0], [0, 1], [-1, 0], [0, -1]])
    for h in (0.3, 0.5, 0.8):
        box = convex_hull([[0.1, h], [-0.1, h], [-0.1, -h], [0.1, -h]])
        w = hilbert_width(diamond, box)
        assert w >= np.log((1 + h) / (1 - h)) - 1e-12
        assert w == pytest.approx(direct_width(diamond.vertices, box.vertices,
                                               np.random.default_rng(0)), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_width_independent_of_center(seed):
    rng = np.random.default_rng(seed)
    pair = nested_pair(rng)
    if pair is None:
        return
    V1, V2 = pair
    K1, K2 = convex_hull(V1), convex_hull(V2)
    c = random_interior(rng, V2, 1)[0]
    assert hilbert_width(K1, K2, c) == pytest.approx(hilbert_width(K1, K2), abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_width_duality_against_direct_oracle(seed):
    rng = np.random.default_rng(seed)
    pair = nested_pair(rng)
    if pair is None:
        return
    V1, V2 = pair
    w = hilbert_width(convex_hull(V1), convex_hull(V2))
    assert w == pytest.approx(direct_width(V1, V2, rng, n_samples=300), abs=1e-6)


def test_width_at_most_diameter():
    rng = np.random.default_rng(3)
    for _ in range(20):
        pair = nested_pair(rng)
        if pair is None:
            continue
        K1, K2 = convex_hull(pair[0]), convex_hull(pair[1])
        assert hilbert_width(K1, K2) <= hilbert_diameter(K1, K2) + 1e-10


# ----------------------------------------------------------------------------
# certificates
# ----------------------------------------------------------------------------

def test_kappa_values():
    assert kappa(2) == pytest.approx(0.7071068, abs=1e-7)
    assert kappa(3) == pytest.approx(0.5477226, abs=1e-7)
    assert ratio_bound(kappa(2)) == pytest.approx(1.7627472, abs=1e-7)
    assert ratio_bound(np.sqrt(0.75)) == pytest.approx(2.63392, abs=1e-5)
    assert ratio_bound(np.sqrt(2 / 3)) == pytest.approx(2.29243, abs=1e-5)


def test_certificate_rule():
    b = ratio_bound(kappa(2))
    assert make_certificate("BodyPair", b - 1e-6, 2).holds
    assert not make_certificate("BodyPair", b - 1e-13, 2).holds
    assert not make_certificate("BodyPair", b + 1.0, 2).holds
    c = make_certificate("BallInner", 1.0, 3)
    assert c.to_dict() == {"kind": "BallInner", "measured": 1.0,
                           "bound": ratio_bound(np.sqrt(0.5)), "holds": True}


def test_certificate_soundness():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 200:
        pair = nested_pair(rng)
        if pair is None:
            continue
        K1, K2 = convex_hull(pair[0]), convex_hull(pair[1])
        res = fit_body_to_body(K1, K2, n_starts=8, seed=checked)
        if not res.certificate.holds:
            continue
        checked += 1
        assert res.n_classes == 1
