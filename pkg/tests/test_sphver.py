import math
from fractions import Fraction

import numpy as np
import pytest

from minorbit import bessel, liealg, orbit, sphver
from minorbit.catalog import Family


def test_k1_exact(all_models):
    for m in all_models:
        rep = sphver.verify_k1(m)
        assert rep.passed
        assert all(c.residual == 0 for c in rep.checks)


def test_kprime_exact_with_negative_control(all_models):
    for m in all_models:
        rep = sphver.verify_kprime(m, samples=100, seed=0)
        assert rep.passed, rep.to_json()


def test_kdoubleprime(all_models):
    for m in all_models:
        rep = sphver.verify_kdoubleprime(m)
        assert rep.passed
        assert rep.checks[0].residual == 0


def test_crown_assembly_from_models(o2, gl2):
    for m in (o2, gl2):
        rep = sphver.assemble_crown(m)
        assert rep.passed, rep.to_json()


@pytest.mark.parametrize("d,e,coeff", [(2, 0, 6), (1, 0, 4), (4, 1, 8), (2, 2, 2)])
def test_crown_assembly_coefficients(d, e, coeff):
    rep = sphver.assemble_crown(d=d, e=e)
    assert rep.passed
    c1, c2 = bessel.d_coefficient_identity(d, e)
    assert c1 == c2 == coeff


def _block_entry(i, j):
    return lambda x: x[i, j]


def test_action_translation(o2):
    be = orbit.float_backend(o2)
    x0 = be.ray_blocks()["e1"]
    op = sphver.ActionOperator(o2, "translation", sphver._ambient_from_block(o2, x0), 2)
    f = _block_entry(1, 0)
    x = 0.3 * be.ray_blocks()["mix"]
    val = op.apply(f, x)
    assert math.isclose(val, x0[1, 0], rel_tol=1e-8)


def test_action_linear_on_constant(o2):
    h1 = np.array([[float(v) for v in row] for row in o2.triples[0].h])
    op = sphver.ActionOperator(o2, "linear", h1, o2.d)
    f = lambda x: 1.0
    be = orbit.float_backend(o2)
    x = 0.7 * be.ray_blocks()["e2"]
    # chi(h_0) = -(j d) nu(h_0) = -d for h_1
    assert math.isclose(op.apply(f, x), -float(o2.d), rel_tol=1e-10)


def test_action_quadratic_character_factor(gl2):
    y1 = np.array([[float(v) for v in row] for row in gl2.triples[0].y])
    op = sphver.ActionOperator(gl2, "quadratic", y1, gl2.d)
    f = lambda x: 1.0
    be = orbit.float_backend(gl2)
    x = 1.2 * be.ray_blocks()["e1"]
    x_amb = sphver._ambient_from_block(gl2, x)
    h = x_amb @ y1 - y1 @ x_amb
    expected = -gl2.d * sphver._nu_float(gl2, h)
    assert math.isclose(op.apply(f, x), expected, rel_tol=1e-10)


def test_action_commutation_x_y_gives_h(o2):
    # [pi(x_1), pi(y_1)] must act like pi(h_1) on smooth functions
    tofloat = lambda mat: np.array([[float(v) for v in row] for row in mat])
    x1, y1, h1 = (tofloat(getattr(o2.triples[0], a)) for a in ("x", "y", "h"))
    op_x = sphver.ActionOperator(o2, "translation", x1, o2.d)
    op_y = sphver.ActionOperator(o2, "quadratic", y1, o2.d)
    op_h = sphver.ActionOperator(o2, "linear", h1, o2.d)

    def f(x):
        return x[1, 0] ** 2 + 0.5 * x[3, 2] - 0.25 * x[1, 0] * x[3, 2]

    be = orbit.float_backend(o2)
    x = 0.4 * be.ray_blocks()["e1"] + 0.9 * be.ray_blocks()["e2"]
    step = 1e-5
    xy = op_x.apply(lambda p: op_y.apply(f, p, step), x, step)
    yx = op_y.apply(lambda p: op_x.apply(f, p, step), x, step)
    direct = op_h.apply(f, x, step)
    assert math.isclose(xy - yx, direct, rel_tol=1e-4, abs_tol=1e-6)


def _short_grid(m, tmax=2.0):
    be = orbit.float_backend(m)
    rays = be.ray_blocks()
    grid = [("origin", 0.0 * rays["e1"])]
    for name, block in rays.items():
        for t in np.arange(0.5, tmax + 0.25, 0.5):
            grid.append((f"{name}:{t:.1f}", float(t) * block))
    return grid


def test_spherical_direct_consistent_with_zero(o2):
    rep = sphver.verify_spherical_direct(o2, grid=_short_grid(o2),
                                         samples=2 * 10 ** 5, seed=0)
    assert rep.passed, rep.to_json()


def test_spherical_direct_gl(gl2):
    rep = sphver.verify_spherical_direct(gl2, grid=_short_grid(gl2),
                                         samples=2 * 10 ** 5, seed=0)
    assert rep.passed, rep.to_json()


def test_spherical_control_rejected(o2):
    rep = sphver.verify_spherical_direct(o2, grid=_short_grid(o2),
                                         samples=2 * 10 ** 5, seed=0, tau_shift=1)
    assert rep.meta["max_abs_z"] > 5.0
    assert not rep.passed


def test_spherical_determinism(o2):
    g = _short_grid(o2, tmax=1.0)
    a = sphver.verify_spherical_direct(o2, grid=g, samples=10 ** 5, seed=3)
    b = sphver.verify_spherical_direct(o2, grid=g, samples=10 ** 5, seed=3)
    assert a.to_json() == b.to_json()


def test_m_invariance_of_transform(o2):
    rep = sphver.m_invariance_check(o2, samples=2 * 10 ** 5, seed=1)
    assert rep.passed, rep.to_json()
