"""The vectorized grid evaluators must agree with the scalar contracts."""

import cmath
import math

import numpy as np
import pytest

import oracles
from ptheta import core, grids


def test_theta_direct_grid_matches_scalar():
    rng = np.random.default_rng(5)
    for q in (0.1, 0.45, complex(0.3, 0.5)):
        xs = (rng.uniform(-20, 20, 50) + 1j * rng.uniform(-10, 10, 50))
        ev = grids.theta_direct_grid(q, xs, 1e-14)
        vals = ev.to_complex()
        for x, v in zip(xs, vals):
            want = core.eval_theta(q, x, 1e-14).complex_value
            assert abs(v - want) <= 1e-11 * max(1.0, abs(want))


def test_product_grid_matches_scalar():
    rng = np.random.default_rng(6)
    for q in (0.3, 2 / 3):
        xs = np.exp(rng.uniform(math.log(1.5), math.log(1e10), 40)) \
            * np.exp(1j * rng.uniform(0, 2 * math.pi, 40))
        ev = grids.thetastar_product_grid(q, xs, 1e-13)
        for x, lm, ag in zip(xs, ev.log_modulus, ev.argument):
            want = core.eval_thetastar_product(q, x, 1e-13)
            assert lm == pytest.approx(want.value.log_modulus, abs=1e-9)
            d = (ag - want.value.argument) % (2 * math.pi)
            assert min(d, 2 * math.pi - d) < 1e-9


def test_g_grid_matches_scalar():
    rng = np.random.default_rng(7)
    xs = np.exp(rng.uniform(math.log(1.2), math.log(1e8), 30)) \
        * np.exp(1j * rng.uniform(0, 2 * math.pi, 30))
    vals, tail = grids.g_grid(0.4, xs, 1e-14)
    for x, v in zip(xs, vals):
        res = core.eval_G(0.4, x, 1e-14)
        scalar_tail = math.exp(res.tail_bound) if res.tail_bound != -math.inf else 0.0
        assert abs(v - res.complex_value) <= tail + scalar_tail + 1e-15
    assert tail >= 0.0


def test_theta_grid_auto_switches_to_identity():
    # ring around mu_60 at q = 2/3 forces the identity path
    center = core.mu(2 / 3, 60)
    xs = grids.circle_points(center, 1 / 6, 64)
    ev = grids.theta_grid(2 / 3, xs, 1e-12)
    assert np.all(np.isfinite(ev.log_modulus))
    assert float(ev.log_modulus.max()) > 600.0
    # and matches the scalar identity path where both run
    want = core.eval_theta_via_identity(2 / 3, complex(xs[0]), 1e-12)
    assert ev.log_modulus[0] == pytest.approx(want.value.log_modulus, abs=1e-9)


def test_theta_system_matches_finite_differences():
    h = 1e-6
    cases = [(0.31, -7.5), (0.5, -11.0), (0.82, -18.3), (0.93, -22.0)]
    for qv, xv in cases:
        sysv = grids.theta_system(np.array([qv + 0j]), np.array([xv + 0j]))

        def f(q_, x_):
            return grids.theta_system(np.array([q_ + 0j]), np.array([x_ + 0j]))["f"][0]

        def fx(q_, x_):
            return grids.theta_system(np.array([q_ + 0j]), np.array([x_ + 0j]))["fx"][0]

        checks = {
            "fx": (f(qv, xv + h) - f(qv, xv - h)) / (2 * h),
            "fq": (f(qv + h, xv) - f(qv - h, xv)) / (2 * h),
            "fxx": (fx(qv, xv + h) - fx(qv, xv - h)) / (2 * h),
            "fxq": (fx(qv + h, xv) - fx(qv - h, xv)) / (2 * h),
        }
        for key, fd in checks.items():
            got = sysv[key][0]
            assert abs(got - fd) <= 2e-5 * max(1e-9, abs(fd)), (qv, xv, key)


def test_theta_system_f_matches_brute_force():
    qs = np.array([0.31, 0.5, 0.6], dtype=complex)
    xs = np.array([-7.5, -11.0, -13.0], dtype=complex)
    sysv = grids.theta_system(qs, xs)
    for q, x, got in zip(qs, xs, sysv["f"]):
        want = oracles.brute_theta(q, x)
        assert abs(got - want) <= 1e-11 * max(1.0, abs(want))


def test_theta_system_shape_mismatch():
    with pytest.raises(core.DomainError):
        grids.theta_system(np.zeros(2, complex) + 0.3, np.zeros(3, complex) - 5)
