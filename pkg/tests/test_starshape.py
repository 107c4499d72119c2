import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from starkit import oracle
from starkit.fixtures import HTRI, LSHAPE, SQUARE, USHAPE
from starkit.models import ModelId, Point, chart_distance, distance
from starkit.regions import (
    Containment, Region, classify_array, contains, hausdorff, interior_angle, region_from_coords,
)
from starkit.scene import random_simple, random_starshaped, starshaped_instance
from starkit.starshape import (
    PreconditionError, certify, extreme_points, farthest_extreme, gap_points, is_starshaped,
    kernel_extreme, kernel_halfplane, ray_condition, ray_hits, sees, star,
)

E, K = ModelId.EUCLIDEAN, ModelId.KLEIN
UNIT = region_from_coords(E, [(0, 0), (1, 0), (1, 1), (0, 1)])


def P(u, v, model=E):
    return Point(model, u, v)


def interior_samples(A, k, rng):
    lo, hi = A.array().min(axis=0), A.array().max(axis=0)
    out = []
    while len(out) < k:
        pts = rng.uniform(lo, hi, (4 * k, 2))
        out.extend(pts[classify_array(A.array(), pts) == 1])
    return np.array(out[:k])


# -- visibility ---------------------------------------------------------------

def test_sees_examples():
    for corner in SQUARE.coords:
        assert sees(SQUARE, P(0.5, 0.5), P(*corner))
    assert not sees(LSHAPE, P(1.8, 0.5), P(0.5, 1.8))
    assert sees(LSHAPE, P(0.5, 0.5), P(0.5, 1.8))
    with pytest.raises(PreconditionError):
        sees(LSHAPE, P(1.5, 1.5), P(0.5, 0.5))


def test_sees_along_boundary_and_through_reflex_vertex():
    assert sees(LSHAPE, P(0, 0), P(2, 0))
    assert sees(LSHAPE, P(1, 1), P(0, 0))
    # grazing the reflex vertex (1, 1) keeps the segment inside
    assert sees(LSHAPE, P(2, 0.5), P(0, 1.5))
    assert not sees(LSHAPE, P(2, 0.9), P(0.9, 2))


@pytest.mark.parametrize("seed", range(12))
def test_sees_matches_dense_sampling(seed):
    model = (E, K)[seed % 2]
    A = random_simple(model, 12, seed)
    rng = np.random.default_rng(seed)
    pts = interior_samples(A, 60, rng)
    for p, q in zip(pts[:30], pts[30:]):
        exact = sees(A, P(*p, model), P(*q, model))
        brute = oracle.brute_sees(A, p, q, n_steps=4096)
        if exact != brute:
            # sampling can only miss a gap, never invent one
            assert exact is False and brute is True


def test_gap_points_examples():
    x, y = gap_points(LSHAPE, P(1.8, 0.5), P(0.5, 1.8))
    assert x.uv == pytest.approx((1.3, 1.0), abs=1e-12)
    assert y.uv == pytest.approx((1.0, 1.3), abs=1e-12)
    assert gap_points(SQUARE, P(0.2, 0.3), P(0.9, 0.7)) is None
    assert gap_points(LSHAPE, P(0.5, 0.5), P(1.9, 0.9)) is None


@pytest.mark.parametrize("model", [E, K])
@given(seed=st.integers(0, 10_000))
def test_gap_endpoints_are_boundary_with_exterior_midpoint(model, seed):
    A = random_simple(model, 10, seed)
    p, q = interior_samples(A, 2, np.random.default_rng(seed))
    gap = gap_points(A, P(*p, model), P(*q, model))
    if gap is None:
        assert sees(A, P(*p, model), P(*q, model))
        return
    x, y = gap
    assert contains(A, x) is Containment.BOUNDARY
    assert contains(A, y) is Containment.BOUNDARY
    mid = P((x.u + y.u) / 2, (x.v + y.v) / 2, model)
    assert contains(A, mid) is Containment.EXTERIOR


# -- stars --------------------------------------------------------------------

def test_star_of_convex_polygon_is_itself():
    S = star(SQUARE, P(0.5, 0.5))
    assert hausdorff(S.region, Region(SQUARE)) <= 1e-12


def test_star_in_kernel_is_whole_polygon_and_matches_oracle():
    S = star(LSHAPE, P(0.5, 0.5))
    assert hausdorff(S.region, Region(LSHAPE)) <= 1e-12
    pts = oracle.brute_star(LSHAPE, (0.5, 0.5), n_dirs=1024)
    assert (classify_array(S.polygon.array(), pts) != -1).all()


def test_star_with_shadow_of_reflex_vertex():
    S = star(LSHAPE, P(1.8, 0.5))
    want = region_from_coords(E, [(0, 0), (2, 0), (2, 1), (1, 1), (0, 1.625)])
    assert hausdorff(S.region, want) <= 1e-12
    assert contains(S.polygon, P(0.5, 1.8)) is Containment.EXTERIOR
    pts = oracle.brute_star(LSHAPE, (1.8, 0.5), n_dirs=1024)
    assert (classify_array(S.polygon.array(), pts, eps=1e-9) != -1).all()
    assert np.hypot(*(pts - (0.5, 1.8)).T).min() > 0.1


def test_intersection_of_two_stars():
    from starkit.regions import intersect_regions
    both = intersect_regions(star(LSHAPE, P(1.8, 0.5)).region, star(LSHAPE, P(0.5, 1.8)).region)
    want = region_from_coords(E, [(0, 0), (1.625, 0), (1, 1), (0, 1.625)])
    assert hausdorff(both, want) <= 1e-12


def test_star_at_boundary_vertex_uses_interior_cone():
    S = star(LSHAPE, P(2, 0))
    assert contains(S.polygon, P(0.5, 1.9)) is Containment.EXTERIOR
    assert contains(S.polygon, P(0.5, 0.5)) is Containment.INTERIOR
    with pytest.raises(PreconditionError):
        star(LSHAPE, P(1.5, 1.5))


@pytest.mark.parametrize("seed", range(16))
def test_star_contains_center_lies_in_polygon_and_covers_oracle(seed):
    model = (E, K)[seed % 2]
    A = random_simple(model, 14, seed)
    c = interior_samples(A, 1, np.random.default_rng(seed))[0]
    S = star(A, P(*c, model))
    assert contains(S.polygon, P(*c, model)) is not Containment.EXTERIOR
    for u, v in S.polygon.coords:
        assert contains(A, P(u, v, model), eps=1e-8) is not Containment.EXTERIOR
    pts = oracle.brute_star(A, c, n_dirs=512)
    outside = pts[classify_array(S.polygon.array(), pts, eps=1e-7) == -1]
    # fixed-step marching can step over a thin occluder; exact visibility decides
    for q in outside:
        assert not sees(A, P(*c, model), P(*q, model))
    # and the star's own interior points are seen from c
    for q in interior_samples(S.polygon, 20, np.random.default_rng(seed + 1)):
        if contains(A, P(*q, model)) is Containment.INTERIOR:
            assert sees(A, P(*c, model), P(*q, model), eps=1e-8)


# -- extreme points -----------------------------------------------------------

def test_extreme_point_examples():
    assert extreme_points(SQUARE).indices == (0, 1, 2, 3)
    assert extreme_points(LSHAPE).indices == (0, 1, 2, 4, 5)
    assert extreme_points(HTRI).indices == (0, 1, 2)


@pytest.mark.parametrize("seed", range(10))
def test_extreme_matches_brute_segment_search(seed):
    model = (E, K)[seed % 2]
    A = random_simple(model, 12, seed)
    E_ = set(extreme_points(A).indices)
    for i in range(len(A)):
        assert (i in E_) == oracle.brute_is_extreme(A, i)
    for i in range(len(LSHAPE)):
        assert (i in extreme_points(LSHAPE).indices) == oracle.brute_is_extreme(LSHAPE, i)


# -- kernels ------------------------------------------------------------------

def test_kernel_examples():
    assert hausdorff(kernel_extreme(SQUARE), Region(SQUARE)) <= 1e-12
    assert hausdorff(kernel_extreme(LSHAPE), UNIT) <= 1e-12
    assert kernel_extreme(USHAPE).is_empty
    assert hausdorff(kernel_halfplane(SQUARE), Region(SQUARE)) <= 1e-12
    assert hausdorff(kernel_halfplane(LSHAPE), UNIT) <= 1e-12
    assert kernel_halfplane(USHAPE).is_empty
    assert hausdorff(kernel_extreme(HTRI), Region(HTRI)) <= 1e-9


def test_is_starshaped_examples():
    ok, w = is_starshaped(LSHAPE)
    assert ok and contains(UNIT.polygon, w) is Containment.INTERIOR
    assert is_starshaped(USHAPE) == (False, None)
    assert is_starshaped(HTRI)[0]


@pytest.mark.parametrize("seed", range(24))
def test_two_kernel_routes_agree(seed):
    model = (E, K)[seed % 2]
    A = (random_starshaped if seed % 3 else random_simple)(model, 5 + seed % 15, seed)
    B, Kh = kernel_extreme(A), kernel_halfplane(A)
    if B.is_empty or Kh.is_empty:
        assert B.is_empty and Kh.is_empty
    else:
        assert hausdorff(B, Kh) <= 1e-6


@pytest.mark.parametrize("seed", range(12))
def test_kernel_points_see_everything(seed):
    model = (E, K)[seed % 2]
    A, _ = starshaped_instance(model, 12, seed)
    Kh = kernel_halfplane(A)
    rng = np.random.default_rng(seed)
    for q in interior_samples(Kh.polygon, 5, rng):
        for x in interior_samples(A, 10, rng):
            assert sees(A, P(*q, model), P(*x, model))


@pytest.mark.parametrize("seed", range(12))
def test_generator_center_is_in_kernel(seed):
    model = (E, K)[seed % 2]
    A, c = starshaped_instance(model, 3 + seed, seed)
    assert contains(kernel_halfplane(A).polygon, c, eps=1e-9) is not Containment.EXTERIOR


def test_convex_polygon_is_its_own_kernel():
    for seed in range(10):
        A = random_starshaped(K, 8, seed)
        if all(interior_angle(A, i) < math.pi for i in range(len(A))):
            assert hausdorff(kernel_extreme(A), Region(A)) <= 1e-9


# -- farthest extreme and rays ------------------------------------------------

def brute_farthest(A, p, n=20_000):
    from starkit.regions import boundary_samples
    return max(chart_distance(A.model, p, s) for s in boundary_samples(A.coords, n))


def test_farthest_extreme_examples():
    v = farthest_extreme(LSHAPE, P(3, 3))
    assert v.uv == (0.0, 0.0)
    assert distance(v, P(3, 3)) == pytest.approx(math.sqrt(18))
    assert brute_farthest(LSHAPE, (3, 3)) == pytest.approx(math.sqrt(18), rel=1e-12)
    assert farthest_extreme(SQUARE, P(2, 0.5)).uv == (0.0, 0.0)
    x = P(0.95, 0, K)
    w = farthest_extreme(HTRI, x)
    assert w.uv in [(-0.6, -0.4), (0.0, 0.75)]
    assert HTRI.coords.index(w.uv) in extreme_points(HTRI).indices
    assert distance(w, x) == pytest.approx(brute_farthest(HTRI, (0.95, 0)), rel=1e-9)
    with pytest.raises(PreconditionError):
        farthest_extreme(LSHAPE, P(0.5, 0.5))


@pytest.mark.parametrize("model", [E, K])
@given(seed=st.integers(0, 10_000), t=st.floats(0, 2 * math.pi), r=st.floats(0.0, 1.0))
def test_farthest_vertex_is_extreme(model, seed, t, r):
    A = random_simple(model, 9, seed)
    rad = (0.5 + r) if model is E else 0.85 + 0.14 * r
    p = (rad * 1.5 * math.cos(t), rad * 1.5 * math.sin(t)) if model is E else (rad * math.cos(t), rad * math.sin(t))
    if contains(A, P(*p, model)) is not Containment.EXTERIOR:
        return
    v = farthest_extreme(A, P(*p, model))
    assert A.coords.index(v.uv) in extreme_points(A).indices


def test_ray_hits_examples():
    x = P(3, 3)
    hit, d = ray_hits(LSHAPE, x, math.atan2(-3, -3))
    assert hit.uv == pytest.approx((1.0, 1.0))
    assert d == pytest.approx(2 * math.sqrt(2))
    assert ray_hits(LSHAPE, x, math.pi / 4) is None
    inside = P(0.5, 0.5)
    assert ray_hits(LSHAPE, inside, 0.3) == (inside, 0.0)


def test_ray_condition_examples():
    ok, theta = ray_condition(LSHAPE, P(3, 3))
    assert ok and ray_hits(LSHAPE, P(3, 3), theta) is not None
    ok, theta = ray_condition(USHAPE, P(1.5, 1.5))
    assert ok
    assert ray_hits(USHAPE, P(1.5, 1.5), -math.pi / 2)[0].uv == pytest.approx((1.5, 1.0))
    with pytest.raises(PreconditionError):
        ray_condition(LSHAPE, P(0.5, 0.5))


def test_klein_ray_distance_is_metric():
    x = P(0.9, 0.0, K)
    hit, d = ray_hits(HTRI, x, math.pi)
    assert d == pytest.approx(distance(x, hit))


# -- certify ------------------------------------------------------------------

def test_certify_examples():
    rep = certify(LSHAPE)
    assert rep.starshaped and hausdorff(rep.kernel, UNIT) <= 1e-12
    assert rep.cross_checks.hausdorff_B_vs_halfplane <= 1e-6
    assert rep.cross_checks.oracle_agreement
    assert rep.ray_condition_vacuous and len(rep.ray_condition_checked) == 32
    rep = certify(USHAPE)
    assert not rep.starshaped and rep.B.is_empty and rep.kernel.is_empty
    assert rep.cross_checks.oracle_agreement
    rep = certify(HTRI)
    assert rep.starshaped and hausdorff(rep.kernel, Region(HTRI)) <= 1e-9


def test_certify_is_deterministic():
    a, b = certify(LSHAPE, seed=3), certify(LSHAPE, seed=3)
    assert [x.uv for x, _ in a.ray_condition_checked] == [x.uv for x, _ in b.ray_condition_checked]
