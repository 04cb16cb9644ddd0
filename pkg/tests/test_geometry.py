"""Bodies, gauges, supports, and section volumes against independent oracles.

The oracles here avoid the code paths under test: translated-ellipsoid
gauges are checked against the explicit quadratic-root formula,
superellipsoid supports against the dual-norm closed form, ellipsoid
sections against the planar chord route and (in test_oracle) Monte Carlo.
"""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert_bodies import (
    BodySpecError,
    Ellipsoid,
    GaugeDomainError,
    PerturbedEllipse,
    Polygon,
    Superellipsoid,
    body_from_dict,
    body_to_dict,
    direction,
    direction_grid,
    gauge,
    gauge_many,
    load_body,
    sample_profile,
    section_volume,
    support_interval,
)
from hilbert_bodies import geometry

from conftest import random_ellipsoid

E1 = direction([1.0, 0.0])
DIAG = direction([1.0, 1.0])


# ---------------------------------------------------------------------------
# gauges


def test_gauge_closed_form_values(disk, ellipse21, superellipse):
    assert gauge(disk, [0.5, 0.0]) == pytest.approx(0.5, abs=1e-14)
    assert gauge(superellipse, [1.0, 1.0]) == pytest.approx(2.0**0.25, abs=1e-12)
    assert gauge(ellipse21, [2.0, 0.0]) == pytest.approx(1.0, abs=1e-14)


def test_gauge_matches_membership(perturbed, superellipse, square):
    rng = np.random.default_rng(7)
    pts = rng.normal(size=(200, 2)) * 1.5
    for body in (perturbed, superellipse, square):
        g = gauge_many(body, pts)
        inside = geometry.contains(body, pts)
        np.testing.assert_array_equal(inside, g <= 1.0)


@given(
    lam=st.floats(min_value=1e-3, max_value=1e3),
    x=st.tuples(
        st.floats(min_value=-3, max_value=3), st.floats(min_value=-3, max_value=3)
    ),
)
@settings(max_examples=200, deadline=None)
def test_gauge_positive_homogeneity(lam, x):
    x = np.array(x)
    if np.linalg.norm(x) < 1e-6:
        return
    body = Superellipsoid(np.array([1.2, 0.8]), 4, np.array([0.1, -0.05]))
    assert gauge(body, lam * x) == pytest.approx(lam * gauge(body, x), rel=1e-9)


def test_translated_ellipsoid_gauge_against_quadratic_root():
    # gauge g of x about the origin solves the quadratic
    # g^2 (c^T M c - 1) - 2 g (c^T M x) + x^T M x = 0 (origin interior)
    rng = np.random.default_rng(11)
    for _ in range(20):
        body = random_ellipsoid(rng, 3)
        m, c = body.shape_matrix, body.center
        x = rng.normal(size=3) * 2.0
        cmx = float(c @ m @ x)
        cmc = float(c @ m @ c)
        xmx = float(x @ m @ x)
        root = (cmx - math.sqrt(cmx**2 + (1.0 - cmc) * xmx)) / (cmc - 1.0)
        assert gauge(body, x) == pytest.approx(root, rel=1e-10)


def test_gauge_requires_interior_origin():
    far = Ellipsoid(np.eye(2), np.array([5.0, 0.0]))
    with pytest.raises(GaugeDomainError, match="origin not interior"):
        gauge(far, [1.0, 0.0])


def test_gauge_at_origin_is_zero(perturbed):
    assert gauge_many(perturbed, np.zeros((1, 2)))[0] == 0.0


# ---------------------------------------------------------------------------
# directions


def test_direction_normalizes_and_rejects_zero():
    d = direction([3.0, 4.0])
    np.testing.assert_allclose(d.coords, [0.6, 0.8], atol=1e-15)
    assert d.dim == 2
    with pytest.raises(BodySpecError, match="zero or non-finite"):
        direction([0.0, 0.0])
    with pytest.raises(BodySpecError):
        direction([np.inf, 1.0])


def test_direction_requires_unit_norm():
    with pytest.raises(BodySpecError, match="not unit length"):
        geometry.Direction(np.array([1.0, 1.0]))


@pytest.mark.parametrize("dim,count", [(2, 16), (3, 25), (4, 12)])
def test_direction_grid_is_deterministic_and_unit(dim, count):
    a = direction_grid(dim, count, seed=42)
    b = direction_grid(dim, count, seed=42)
    assert len(a) == count
    for da, db in zip(a, b):
        np.testing.assert_array_equal(da.coords, db.coords)
        assert np.linalg.norm(da.coords) == pytest.approx(1.0, abs=1e-12)
    c = direction_grid(dim, count, seed=43)
    assert any(np.any(x.coords != y.coords) for x, y in zip(a, c))


def test_direction_grid_planar_avoids_axes():
    for seed in (1, 42, 999):
        for d in direction_grid(2, 32, seed=seed):
            ang = math.atan2(d.coords[1], d.coords[0])
            assert min(abs(ang % (math.pi / 2)), math.pi / 2 - ang % (math.pi / 2)) > 1e-3


# ---------------------------------------------------------------------------
# support intervals


def test_support_unit_ball_any_direction(disk):
    for d in direction_grid(2, 8):
        iv = support_interval(disk, d)
        assert iv.h_minus == pytest.approx(-1.0, abs=1e-12)
        assert iv.h_plus == pytest.approx(1.0, abs=1e-12)


def test_support_ellipse_axis_and_translate(ellipse21):
    iv = support_interval(ellipse21, E1)
    assert (iv.h_minus, iv.h_plus) == pytest.approx((-2.0, 2.0), abs=1e-12)
    shifted = Ellipsoid(np.diag([0.25, 1.0]), np.array([1.0, 0.0]))
    iv2 = support_interval(shifted, E1)
    assert (iv2.h_minus, iv2.h_plus) == pytest.approx((-1.0, 3.0), abs=1e-12)


def test_support_cross_route_ellipse_vs_boundary_scan(ellipse21):
    # the zero-perturbation body is the same set but runs the golden-section
    # route instead of the ellipsoid closed form
    flat = PerturbedEllipse(np.array([2.0, 1.0]), 0.0, 3)
    for d in direction_grid(2, 12, seed=5):
        iv_cf = support_interval(ellipse21, d)
        iv_gs = support_interval(flat, d)
        assert iv_gs.h_minus == pytest.approx(iv_cf.h_minus, abs=1e-9)
        assert iv_gs.h_plus == pytest.approx(iv_cf.h_plus, abs=1e-9)


def _dual_norm_support(body: Superellipsoid, xi: np.ndarray) -> float:
    # h(xi) = ||(a_i xi_i)||_{p'} + c.xi with 1/p + 1/p' = 1 (Hoelder equality)
    p = body.exponent
    pp = p / (p - 1.0)
    return float(
        np.sum(np.abs(body.semi_axes * xi) ** pp) ** (1.0 / pp) + body.center @ xi
    )


@pytest.mark.parametrize("dim", [2, 3])
def test_support_superellipsoid_against_dual_norm(dim):
    rng = np.random.default_rng(3)
    axes = rng.uniform(0.7, 1.8, size=dim)
    center = rng.uniform(-0.2, 0.2, size=dim)
    body = Superellipsoid(axes, 6, center)
    for d in direction_grid(dim, 6, seed=9):
        iv = support_interval(body, d)
        assert iv.h_plus == pytest.approx(_dual_norm_support(body, d.coords), abs=1e-8)
        assert iv.h_minus == pytest.approx(
            -_dual_norm_support(body, -d.coords), abs=1e-8
        )


def test_support_polygon_is_vertex_max(square):
    for d in direction_grid(2, 10, seed=2):
        iv = support_interval(square, d)
        proj = square.vertices @ d.coords
        assert iv.h_plus == pytest.approx(float(proj.max()), abs=1e-14)
        assert iv.h_minus == pytest.approx(float(proj.min()), abs=1e-14)


def test_support_translation_covariance():
    rng = np.random.default_rng(17)
    base = random_ellipsoid(rng, 2, centered=True)
    v = np.array([0.3, -0.7])
    moved = Ellipsoid(base.shape_matrix, v)
    for d in direction_grid(2, 8, seed=4):
        iv0 = support_interval(base, d)
        iv1 = support_interval(moved, d)
        shift = float(v @ d.coords)
        assert iv1.h_minus == pytest.approx(iv0.h_minus + shift, abs=1e-12)
        assert iv1.h_plus == pytest.approx(iv0.h_plus + shift, abs=1e-12)


def test_gauge_support_duality_on_boundary_points():
    # h(xi) equals the max of x.xi over the boundary; 1e4 polar samples of an
    # ellipse boundary reach it to quadratic accuracy, well under 1e-6
    rng = np.random.default_rng(23)
    body = random_ellipsoid(rng, 2)
    th = np.linspace(0.0, 2.0 * np.pi, 10**4, endpoint=False)
    boundary = geometry._boundary_points(body, th)
    for d in direction_grid(2, 6, seed=8):
        h_closed = support_interval(body, d).h_plus
        h_sampled = float(np.max(boundary @ d.coords))
        assert h_sampled <= h_closed + 1e-12
        assert h_sampled == pytest.approx(h_closed, abs=1e-6)


def test_degenerate_interval_rejected():
    with pytest.raises(BodySpecError, match="degenerate support interval"):
        geometry.SupportInterval(1.0, 1.0)


# ---------------------------------------------------------------------------
# section volumes


def test_section_disk_chord(disk):
    assert section_volume(disk, E1, 0.6) == pytest.approx(1.6, abs=1e-12)


def test_section_ellipse_value_and_planar_constant(ellipse21):
    # A = 2 sqrt(1 - t^2/4) along the major axis; fixes C_2 = 2/pi in the
    # ellipsoid formula  C_n Vol(E) h^{-n} (h^2 - t^2)^{(n-1)/2}
    assert section_volume(ellipse21, E1, 1.0) == pytest.approx(math.sqrt(3.0), abs=1e-12)
    vol = math.pi * 2.0  # area of the (2,1) ellipse
    h = 2.0
    c2 = 2.0 / math.pi
    expect = c2 * vol * h**-2 * math.sqrt(h**2 - 1.0)
    assert section_volume(ellipse21, E1, 1.0) == pytest.approx(expect, abs=1e-12)


def test_section_ball4_center(ball4):
    e = direction([1.0, 0.0, 0.0, 0.0])
    assert section_volume(ball4, e, 0.0) == pytest.approx(4.0 * math.pi / 3.0, abs=1e-10)


def test_section_outside_support_is_zero(disk, perturbed):
    assert section_volume(disk, E1, 1.5) == 0.0
    assert section_volume(perturbed, E1, 5.0) == 0.0


def test_section_translation_covariance():
    rng = np.random.default_rng(31)
    base = random_ellipsoid(rng, 3, centered=True)
    v = np.array([0.2, -0.1, 0.4])
    moved = Ellipsoid(base.shape_matrix, v)
    d = direction([0.3, -1.0, 0.5])
    shift = float(v @ d.coords)
    for t in (-0.3, 0.0, 0.4):
        assert section_volume(moved, d, t + shift) == pytest.approx(
            section_volume(base, d, t), abs=1e-10
        )


def test_section_translation_covariance_chord_route():
    base = PerturbedEllipse(np.array([1.3, 1.0]), 0.05, 3)
    v = np.array([0.15, -0.25])
    moved = PerturbedEllipse(np.array([1.3, 1.0]), 0.05, 3, v)
    d = direction([2.0, 1.0])
    shift = float(v @ d.coords)
    for t in (-0.5, 0.1, 0.6):
        assert section_volume(moved, d, t + shift) == pytest.approx(
            section_volume(base, d, t), abs=1e-9
        )


def test_section_reflection_symmetry(perturbed):
    # A(-xi, -t) = A(xi, t)
    d = direction([0.8, 0.6])
    dneg = direction([-0.8, -0.6])
    for t in (-0.4, 0.2, 0.7):
        assert section_volume(perturbed, dneg, -t) == pytest.approx(
            section_volume(perturbed, d, t), abs=1e-10
        )


def test_ellipsoid_closed_form_vs_chord_oracle_planar():
    # the chord route never runs for Ellipsoid bodies in production; call it
    # directly as the independent reference
    rng = np.random.default_rng(41)
    worst = 0.0
    for _ in range(44):
        body = random_ellipsoid(rng, 2)
        d = direction(rng.normal(size=2))
        iv = support_interval(body, d)
        ts = iv.midpoint + 0.4 * iv.width * rng.uniform(-1.0, 1.0, size=3)
        closed = geometry._ellipsoid_section(body, d.coords, ts)
        chord = geometry._chord_many(body, d.coords, ts)
        worst = max(worst, float(np.max(np.abs(closed - chord))))
    assert worst < 1e-8


# ---------------------------------------------------------------------------
# profiles


def test_profile_disk_layout_and_symmetry(disk):
    p = sample_profile(disk, E1, node_count=16)
    assert p.nodes.shape == (16,)
    assert p.source == "closed-form"
    assert np.all(p.values > 0.0)
    assert np.all(p.values <= 2.0)
    assert np.all(np.diff(p.nodes) > 0.0)
    # second-kind Chebyshev layout, symmetric about the midpoint
    j = np.arange(1, 17)
    expect = np.cos(j * np.pi / 17.0)[::-1]
    np.testing.assert_allclose(p.nodes, expect, atol=1e-14)
    np.testing.assert_allclose(p.values, p.values[::-1], atol=1e-14)


def test_profile_values_match_section_volume(ellipse21):
    d = direction([0.6, 0.8])
    p = sample_profile(ellipse21, d, node_count=32)
    expect = np.array([section_volume(ellipse21, d, float(t)) for t in p.nodes])
    np.testing.assert_allclose(p.values, expect, atol=1e-13)


def test_profile_source_tags(perturbed):
    p = sample_profile(perturbed, E1, node_count=16)
    assert p.source == "chord"
    assert p.stderr is None
    se3 = Superellipsoid(np.array([1.0, 1.1, 0.9]), 4)
    m = sample_profile(se3, direction([1.0, 0.0, 0.0]), node_count=8, mc_samples=10**4)
    assert m.source == "monte-carlo"
    assert m.stderr is not None and np.all(m.stderr > 0.0)


def test_profile_rejects_tiny_node_count(disk):
    with pytest.raises(ValueError, match="at least 8"):
        sample_profile(disk, E1, node_count=4)


@pytest.mark.parametrize(
    "fixture", ["disk", "ellipse21", "superellipse", "perturbed"]
)
def test_profile_root_concavity(fixture, request):
    # Brunn-Minkowski: A^{1/(n-1)} is concave, so every second divided
    # difference of the sampled profile is nonpositive up to rounding
    body = request.getfixturevalue(fixture)
    p = sample_profile(body, DIAG, node_count=64)
    g = p.values  # n = 2: A itself
    t = p.nodes
    dd = np.array(
        [
            ((g[i + 2] - g[i + 1]) / (t[i + 2] - t[i + 1]) - (g[i + 1] - g[i]) / (t[i + 1] - t[i]))
            / (t[i + 2] - t[i])
            for i in range(len(t) - 2)
        ]
    )
    scale = float(np.max(g)) / p.interval.width**2
    assert float(np.max(dd)) <= 1e-8 * scale


def test_profile_rejects_negative_values(disk):
    iv = geometry.SupportInterval(-1.0, 1.0)
    nodes = geometry.chebyshev_nodes(iv, 8)
    with pytest.raises(BodySpecError, match="negative section volume"):
        geometry.SectionProfile(E1, iv, nodes, np.full(8, -1.0), "chord")


# ---------------------------------------------------------------------------
# construction errors


def test_ellipsoid_rejects_bad_matrices():
    with pytest.raises(BodySpecError, match="positive definite"):
        Ellipsoid(np.diag([1.0, -1.0]))
    with pytest.raises(BodySpecError, match="not symmetric"):
        Ellipsoid(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(BodySpecError, match="square"):
        Ellipsoid(np.ones((2, 3)))
    with pytest.raises(BodySpecError, match="center dimension"):
        Ellipsoid(np.eye(2), np.zeros(3))


def test_superellipsoid_rejects_bad_exponents():
    with pytest.raises(BodySpecError, match="even integer >= 4"):
        Superellipsoid(np.array([1.0, 1.0]), 3)
    with pytest.raises(BodySpecError, match="even integer >= 4"):
        Superellipsoid(np.array([1.0, 1.0]), 2)
    with pytest.raises(BodySpecError, match="positive"):
        Superellipsoid(np.array([1.0, 0.0]), 4)


def test_perturbed_ellipse_parameter_range():
    with pytest.raises(BodySpecError, match="epsilon"):
        PerturbedEllipse(np.array([1.0, 1.0]), 0.5, 3)
    with pytest.raises(BodySpecError, match="frequency"):
        PerturbedEllipse(np.array([1.0, 1.0]), 0.05, 2)


def test_perturbed_ellipse_curvature_rejection():
    # for the unit circle the boundary stays convex iff eps (k^2 + 2) <= 1;
    # eps = 0.2, k = 3 violates it while passing the plain range checks
    with pytest.raises(BodySpecError, match="breaks convexity"):
        PerturbedEllipse(np.array([1.0, 1.0]), 0.2, 3)
    PerturbedEllipse(np.array([1.0, 1.0]), 0.05, 3)  # and this one is fine


def test_polygon_rejects_clockwise_and_collinear():
    cw = np.array([[1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(BodySpecError, match="counterclockwise"):
        Polygon(cw)
    collinear = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 1.0]])
    with pytest.raises(BodySpecError):
        Polygon(collinear)
    with pytest.raises(BodySpecError, match="at least 3"):
        Polygon(np.array([[0.0, 0.0], [1.0, 0.0]]))


# ---------------------------------------------------------------------------
# serialization


def _round_trip(body):
    d = body_to_dict(body)
    return body_to_dict(body_from_dict(json.loads(json.dumps(d))))


def test_serialization_round_trips(ellipse21, superellipse, perturbed, square):
    for body in (ellipse21, superellipse, perturbed, square):
        assert _round_trip(body) == body_to_dict(body)


def test_load_body_reads_files(tmp_path, ellipse21):
    path = tmp_path / "body.json"
    path.write_text(json.dumps(body_to_dict(ellipse21)))
    loaded = load_body(path)
    np.testing.assert_array_equal(loaded.shape_matrix, ellipse21.shape_matrix)


def test_body_from_dict_error_reporting():
    with pytest.raises(BodySpecError, match="'kind'"):
        body_from_dict({"shape_matrix": [[1, 0], [0, 1]]})
    with pytest.raises(BodySpecError, match="unknown body kind"):
        body_from_dict({"kind": "torus"})
    with pytest.raises(BodySpecError, match="missing field"):
        body_from_dict({"kind": "ellipsoid"})
    with pytest.raises(BodySpecError, match="declared dim"):
        body_from_dict({"kind": "ellipsoid", "dim": 3, "shape_matrix": [[1, 0], [0, 1]]})
    with pytest.raises(BodySpecError, match="eigenvalue"):
        body_from_dict({"kind": "ellipsoid", "shape_matrix": [[1, 0], [0, -1]]})


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=50, deadline=None)
def test_random_ellipsoid_dict_round_trip(seed):
    rng = np.random.default_rng(seed)
    body = random_ellipsoid(rng, int(rng.integers(2, 5)))
    again = body_from_dict(body_to_dict(body))
    np.testing.assert_allclose(again.shape_matrix, body.shape_matrix, rtol=0.0, atol=0.0)
    np.testing.assert_allclose(again.center, body.center, rtol=0.0, atol=0.0)
