import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy import stats

from minorbit import bessel, liealg, orbit, ratlin
from minorbit.reports import QuadratureError


def _tofloat(mat):
    return np.array([[float(v) for v in row] for row in mat])


def test_rational_orbit_points_exact(o2, gl2):
    for m in (o2, gl2):
        pts = orbit.sample_orbit_rational(m, 30, seed=5)
        assert all((pts[0].y == m.triples[0].y).flat)
        for p in pts:
            assert p.exact
            assert ratlin.is_zero_matrix(p.membership_residual(m))


def test_rational_orbit_determinism(o2):
    a = orbit.sample_orbit_rational(o2, 10, seed=42)
    b = orbit.sample_orbit_rational(o2, 10, seed=42)
    for p, q in zip(a, b):
        assert all((p.y == q.y).flat)


def test_scaled_point_radius(o2):
    p = orbit.sample_orbit_rational(o2, 3, seed=1)[2]
    doubled = 2 * p.y
    assert liealg.norm_nbar(o2, doubled) == pytest.approx(2 * p.radius, rel=1e-12)


def test_base_sampler_unit_radius(o2, gl2):
    for m in (o2, gl2):
        pts = orbit.sample_base(m, 200, seed=9)
        scale = float(m.form_scale)
        for p in pts:
            y = p.y
            rad_sq = -scale * float(np.trace(y @ (-y.T)))
            assert abs(rad_sq - 1.0) < 1e-12
            resid = p.membership_residual(m)
            assert np.abs(resid).max() < 1e-9


def test_base_sampler_mean_pairing(o2):
    pts = orbit.sample_base(o2, 500, seed=3)
    scale = float(o2.form_scale)
    vals = [scale * float(np.trace(p.y @ p.y.T)) for p in pts]  # <y, -theta y>
    assert np.allclose(vals, 1.0, atol=1e-12)


def test_base_sampler_m_invariance_two_sample(o2, gl2):
    # the distribution of a fixed statistic is unchanged by a fixed rotation
    for m in (o2, gl2):
        be = orbit.float_backend(m)
        rng = np.random.default_rng(17)
        u, v = be.sample_units(rng, 4000)
        w = np.ones(4000)
        stat = be.pair_theta_y1(u, v, w)
        ru, rv = be.m_rotation_units()(u, v)
        stat_rot = be.pair_theta_y1(ru, rv, w)
        ks = stats.ks_2samp(stat, stat_rot)
        assert ks.pvalue > 1e-3, (m.family, ks)


def test_backend_pairings_match_exact_model(all_models):
    for m in all_models:
        be = orbit.float_backend(m)
        rng = np.random.default_rng(7)
        u, v = be.sample_units(rng, 5)
        w = np.array([0.7, 1.3, 2.1, 0.5, 3.3])
        mats = be.matrices(u, v, w)
        scale = float(m.form_scale)
        y1 = _tofloat(m.triples[0].y)
        th_y1 = _tofloat(m.theta(m.triples[0].y))
        xb = be.ray_blocks()["mix"]
        amb = m.dim_ambient
        blk = be.block
        x_full = np.zeros((amb, amb))
        if m.family.value == "o2n2n":
            x_full[blk:, :blk] = xb
        else:
            x_full[:blk, blk:] = xb
        for i in range(5):
            y = mats[i]
            assert math.isclose(scale * np.trace(x_full @ y),
                                be.pair_x(xb, u[i:i+1], v[i:i+1], w[i:i+1])[0],
                                abs_tol=1e-12)
            assert math.isclose(scale * np.trace(th_y1 @ y),
                                be.pair_theta_y1(u[i:i+1], v[i:i+1], w[i:i+1])[0],
                                abs_tol=1e-12)
            th_y = -y.T
            crown = (th_y @ y1 - y1 @ th_y)
            crown = crown @ y - y @ crown
            assert math.isclose(scale * np.trace(x_full @ crown),
                                be.crown_pair(xb, u[i:i+1], v[i:i+1], w[i:i+1])[0],
                                abs_tol=1e-11)


def test_radial_integral_closed_form(o2):
    val = orbit.l2_norm_g_tau(o2)
    assert math.isclose(val, math.pi / 8, rel_tol=1e-6)


def test_radial_integral_against_high_precision(gl2):
    val = orbit.l2_norm_g_tau(gl2)  # tau = 0, exponent 1
    with mpmath.workdps(30):
        ref = float(mpmath.quad(lambda w: mpmath.besselk(0, w) ** 2 * w, [0, 1, mpmath.inf]))
    assert math.isclose(val, ref, rel_tol=1e-6)


def test_radial_integral_divergence_diagnostic():
    with pytest.raises(QuadratureError, match="diverges"):
        orbit.l2_radial_integral(Fraction(3, 2), 3)


def test_measure_scaling(o2, gl2):
    for m in (o2, gl2):
        rep = orbit.scaling_check(m, samples=200_000, seed=4, rtol=0.02)
        assert rep.passed, rep.to_json()


def test_equivariance(o2, gl2):
    for m in (o2, gl2):
        rep = orbit.equivariance_check(m, l_samples=2, seed=4,
                                       samples=200_000, rtol=0.02)
        assert rep.passed, rep.to_json()


def test_fourier_at_origin_positive(o2):
    be = orbit.float_backend(o2)
    est = orbit.fourier_phi(o2, 0.0 * be.ray_blocks()["e1"], samples=10 ** 5, seed=2)
    assert est.value.real > 0
    assert est.value.imag == 0.0
    assert est.stderr < 0.05 * est.value.real


def test_fourier_determinism(o2):
    be = orbit.float_backend(o2)
    x = be.ray_blocks()["e1"]
    a = orbit.fourier_phi(o2, x, samples=10 ** 5, seed=12)
    b = orbit.fourier_phi(o2, x, samples=10 ** 5, seed=12)
    assert a.value == b.value and a.stderr == b.stderr


def test_fourier_m_invariance(o2):
    be = orbit.float_backend(o2)
    rot = be.m_rotation_x()
    x = 2.0 * be.ray_blocks()["mix"]
    a = orbit.fourier_phi(o2, x, samples=3 * 10 ** 5, seed=5)
    b = orbit.fourier_phi(o2, rot(x), samples=3 * 10 ** 5, seed=6)
    assert abs(a.value.real - b.value.real) < 3 * math.hypot(a.stderr, b.stderr)


def test_fourier_decay_trend(o2):
    be = orbit.float_backend(o2)
    ray = be.ray_blocks()["e1"]
    vals = [abs(orbit.fourier_phi(o2, t * ray, samples=2 * 10 ** 5, seed=8).value)
            for t in (1.0, 2.5, 5.0, 10.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_fourier_accepts_exact_n_elements(o2):
    x1 = o2.triples[0].x
    est = orbit.fourier_phi(o2, x1, samples=10 ** 5, seed=3)
    assert est.value.real > 0


def test_fourier_requires_enough_samples(o2):
    be = orbit.float_backend(o2)
    with pytest.raises(ValueError):
        orbit.fourier_phi(o2, be.ray_blocks()["e1"], samples=100, seed=0)


def test_radial_measure_metadata(o2):
    rm = orbit.radial_measure(o2)
    assert rm.exponent == 3
    assert rm.base_mass == 1.0
