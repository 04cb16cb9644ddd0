"""Condition checks, exponents, gauge-power parity, and the aggregate verdict.

The headline separation this module must deliver: ellipsoid profiles fit
their condition targets to ~1e-13 while the smooth non-ellipsoids plateau
around 1e-5..1e-2 at degree <= 16 — eight orders of magnitude apart, far
on either side of the 1e-6 verdict threshold.
"""

import math

import numpy as np
import pytest

from hilbert_bodies import (
    Ellipsoid,
    NoiseFloorError,
    QFactor,
    Superellipsoid,
    check_condition,
    direction,
    estimate_exponent,
    fit_q,
    minkowski_parity_check,
    sample_profile,
    verdict,
)
from hilbert_bodies import geometry

from conftest import random_ellipsoid

E1 = direction([1.0, 0.0])
D45 = direction([1.0, 1.0])


# ---------------------------------------------------------------------------
# q-factor


def test_fit_q_disk(disk):
    q = fit_q(sample_profile(disk, E1, 16))
    assert q.q0 == 1.0
    assert (q.h_minus, q.h_plus) == pytest.approx((-1.0, 1.0), abs=1e-12)
    assert q(0.0) == pytest.approx(1.0)
    assert q(0.5) == pytest.approx(0.75)  # (1-t)(t+1) at t=0.5


def test_fit_q_ellipse_major_axis(ellipse21):
    q = fit_q(sample_profile(ellipse21, E1, 16))
    assert (q.h_minus, q.h_plus) == pytest.approx((-2.0, 2.0), abs=1e-12)
    assert q(1.0) == pytest.approx(3.0)  # 4 - t^2


def test_fit_q_roots_shift_with_translation():
    shifted = Ellipsoid(np.eye(2), np.array([0.4, 0.0]))
    q = fit_q(sample_profile(shifted, E1, 16))
    assert (q.h_minus, q.h_plus) == pytest.approx((-0.6, 1.4), abs=1e-12)


def test_qfactor_validation():
    with pytest.raises(ValueError):
        QFactor(0.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        QFactor(1.0, 1.0, -1.0)  # roots out of order


# ---------------------------------------------------------------------------
# condition checks


def test_disk_condition_iii_is_linear(disk):
    rep = check_condition(sample_profile(disk, E1, 128), "iii")
    assert rep.degree == 1
    assert rep.sup_residual < 1e-8
    np.testing.assert_allclose(rep.coeffs.coeffs[: 2], [0.0, 2.0], atol=1e-10)


def test_ellipse_condition_degrees(ellipse21):
    profile = sample_profile(ellipse21, direction([0.8, -0.6]), 128)
    degrees = {w: check_condition(profile, w).degree for w in ("i", "ii", "iii")}
    assert degrees == {"i": 0, "ii": 2, "iii": 1}
    for w in ("i", "ii", "iii"):
        assert check_condition(profile, w).sup_residual < 1e-8


def test_ball4_condition_i_recovers_kappa3(ball4):
    # A/sqrt(q) = kappa_3 (1 - t^2) for the unit 4-ball
    profile = sample_profile(ball4, direction([1.0, 0, 0, 0]), 128)
    rep = check_condition(profile, "i")
    assert rep.degree == 2
    assert rep.sup_residual < 1e-8
    kappa3 = 4.0 * math.pi / 3.0
    np.testing.assert_allclose(rep.coeffs.coeffs, [kappa3, 0.0, -kappa3], atol=1e-10)


def test_superellipse_condition_iii_plateaus_above_threshold(superellipse):
    # Chebyshev fits of the analytic non-polynomial target converge
    # geometrically: > 1e-3 through degree 6, still > 1e-6 at the
    # degree-16 plateau (measured 1.0e-5 on the diagonal) — rejected at the
    # verdict threshold but far from the naive 1e-3 at high degree
    profile = sample_profile(superellipse, D45, 128)
    plateau = check_condition(profile, "iii", n_max_degree=16, tol=1e-6)
    assert plateau.degree == 16
    assert plateau.sup_residual > 1e-6
    low = check_condition(profile, "iii", n_max_degree=6, tol=1e-6)
    assert low.sup_residual > 1e-3


def test_check_condition_input_validation(disk):
    profile = sample_profile(disk, E1, 16)
    with pytest.raises(ValueError, match="one of"):
        check_condition(profile, "iv")
    with pytest.raises(ValueError, match="at least 68 nodes"):
        check_condition(profile, "i", n_max_degree=16)


def test_noise_floor_error_on_noisy_profiles(disk):
    clean = sample_profile(disk, E1, 128)
    noisy = geometry.SectionProfile(
        clean.direction,
        clean.interval,
        clean.nodes,
        clean.values,
        "monte-carlo",
        np.full_like(clean.values, 0.05),
    )
    with pytest.raises(NoiseFloorError, match="raise samples"):
        check_condition(noisy, "i", n_max_degree=8, tol=1e-6)


# ---------------------------------------------------------------------------
# boundary exponents


def test_exponent_disk(disk):
    rep = estimate_exponent(disk, E1)
    assert rep.exponent_plus == pytest.approx(0.5, abs=0.05)
    assert rep.exponent_minus == pytest.approx(0.5, abs=0.05)
    # A = 2 sqrt((1-t)(1+t)) ~ 2 sqrt(2) (1-t)^(1/2) near t = 1
    assert rep.c_plus == pytest.approx(2.0 * math.sqrt(2.0), rel=0.05)
    assert rep.warning is None


def test_exponent_ball4(ball4):
    rep = estimate_exponent(ball4, direction([0.5, 0.5, 0.5, 0.5]))
    assert rep.exponent_plus == pytest.approx(1.5, abs=0.05)
    assert rep.exponent_minus == pytest.approx(1.5, abs=0.05)


def test_exponent_polygon_flagged(square):
    rep = estimate_exponent(square, direction([1.0, 0.3]))
    assert rep.warning is not None and "non-smooth" in rep.warning
    # planar chord through a corner grows linearly, not like sqrt
    assert rep.exponent_plus == pytest.approx(1.0, abs=0.05)


# ---------------------------------------------------------------------------
# gauge-power parity


def test_parity_centered_ellipse_cubic_power(ellipse21):
    rep = minkowski_parity_check(ellipse21, 3)
    assert rep.total_degree == 2
    assert rep.sup_residual < 1e-8
    assert not rep.trivial


def test_parity_even_power_trivial_for_symmetric_bodies(ellipse21):
    rep = minkowski_parity_check(ellipse21, 2)
    assert rep.trivial
    assert rep.sup_residual == 0.0


def test_parity_superellipse_fails(superellipse):
    assert minkowski_parity_check(superellipse, 3).sup_residual > 1e-3


def test_parity_requires_large_power(ellipse21):
    with pytest.raises(ValueError, match="m > n - 1"):
        minkowski_parity_check(ellipse21, 1)


# ---------------------------------------------------------------------------
# the aggregate verdict


def test_verdict_ellipse_compatible():
    rng = np.random.default_rng(19)
    v = verdict(random_ellipsoid(rng, 2), direction_count=8)
    assert v.ellipsoid_compatible
    assert v.conditions_consistent
    assert (v.pass_i, v.pass_ii, v.pass_iii) == (True, True, True)
    assert not v.skipped
    for r in v.directions:
        assert max(r.residual_i, r.residual_ii, r.residual_iii) < 1e-6
        assert (r.degree_i, r.degree_ii, r.degree_iii) == (0, 2, 1)


def test_verdict_invariant_under_rigid_motions():
    rng = np.random.default_rng(29)
    base = random_ellipsoid(rng, 2, centered=True)
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    m = q @ base.shape_matrix @ q.T
    moved = Ellipsoid(0.5 * (m + m.T), np.array([0.3, -0.2]))
    v0 = verdict(base, direction_count=8)
    v1 = verdict(moved, direction_count=8)
    assert (v0.pass_i, v0.pass_ii, v0.pass_iii) == (v1.pass_i, v1.pass_ii, v1.pass_iii)
    assert v0.ellipsoid_compatible and v1.ellipsoid_compatible


def test_verdict_superellipse_rejected(superellipse):
    v = verdict(superellipse, direction_count=8)
    assert not v.ellipsoid_compatible
    assert v.conditions_consistent  # all three fail together
    assert (v.pass_i, v.pass_ii, v.pass_iii) == (False, False, False)
    assert all(r.residual_iii > 1e-6 for r in v.directions)


def test_verdict_ball3_odd_dimension_control(ball3):
    v = verdict(ball3, direction_count=8)
    assert not v.ellipsoid_compatible
    assert v.conditions_consistent


def test_verdict_noise_floor_aborts():
    # oblique cuts through a 0.03-thin slab fill ~1% of the sampling box,
    # pushing the monte-carlo noise floor past the widening cap
    thin = Superellipsoid(np.array([1.0, 0.03, 0.9]), 4)
    with pytest.raises(NoiseFloorError, match="raise samples"):
        verdict(thin, direction_count=8, node_count=40, n_max_degree=8, mc_samples=10**4)


def test_verdict_requires_enough_directions(disk):
    with pytest.raises(ValueError, match="at least 8"):
        verdict(disk, direction_count=4)
