import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tuberupture.integrator import IntegratorConfig, integrate
from tuberupture.invariant import (
    coeffs,
    drift_series,
    eval_full,
    eval_sampled,
    eval_secular,
    k_constant,
)
from tuberupture.model import SystemParams

Y0, EPS = 1.0, 0.1


def test_coeffs_at_tau_zero():
    # all oscillatory/secular corrections cancel at tau = 0
    c = coeffs(0.0, Y0, EPS)
    assert c.a1 == 0.0
    assert c.a2 == EPS / 2
    assert c.a3 == pytest.approx(Y0, abs=1e-15)
    assert c.a4 == pytest.approx(0.0, abs=1e-15)
    assert c.a5 == pytest.approx(Y0, abs=1e-15)
    assert c.a6 == pytest.approx(2.0 / (3.0 * Y0**1.5), abs=1e-15)


def test_coeffs_at_half_pi():
    c = coeffs(math.pi / 2, Y0, EPS)
    assert c.a1 == pytest.approx(EPS / 2, rel=1e-14)
    assert c.a2 == pytest.approx(0.0, abs=1e-15)


def test_a4_at_two_pi():
    # only the secular 30*tau*cos(2*tau) term survives at tau = 2*pi
    c = coeffs(2.0 * math.pi, Y0, EPS)
    expected = -(EPS**2 / (288.0 * Y0**6)) * 30.0 * 2.0 * math.pi
    assert c.a4 == pytest.approx(expected, rel=1e-12)


def test_a3_a5_a6_at_pi():
    # hand-reduced closed values at tau = pi
    c = coeffs(math.pi, Y0, EPS)
    assert c.a3 == pytest.approx(Y0 + EPS**2 / 6.0 / Y0**6, rel=1e-12)
    assert c.a5 == pytest.approx(Y0 + EPS**2 / 9.0, rel=1e-12)
    assert c.a6 == pytest.approx(
        2.0 / (3.0 * Y0**1.5) - EPS**2 / (9.0 * Y0**8.5), rel=1e-12
    )


def test_a3_a5_at_two_pi():
    # both brackets vanish at full periods
    c = coeffs(2.0 * math.pi, Y0, EPS)
    assert c.a3 == pytest.approx(Y0, rel=1e-13)
    assert c.a5 == pytest.approx(Y0, rel=1e-13)


def test_a3_minus_a5_is_the_a3_bracket():
    # A3 and A5 share everything except the cosine/secular bracket
    from tuberupture.invariant import _secular_bracket_a3

    for tau in (0.7, 2.9, 13.4):
        c = coeffs(tau, Y0, EPS)
        diff = c.a3 - c.a5
        assert abs(diff) < EPS * 0.5  # first-order small
        assert diff == pytest.approx(_secular_bracket_a3(tau, Y0, EPS), abs=1e-15)


def test_eval_full_at_zero_equals_k():
    for y0, z0 in ((1.0, 0.2), (1.3, 0.1), (0.8, 0.35)):
        params = SystemParams(y0=y0, eps=0.07, z0=z0)
        assert eval_full(z0, 0.0, 0.0, y0, 0.07) == pytest.approx(
            k_constant(params), rel=1e-14
        )


@given(
    z=st.floats(min_value=-0.5, max_value=0.5),
    p=st.floats(min_value=-0.5, max_value=0.5),
    n=st.integers(min_value=-10_000, max_value=10_000),
)
@settings(max_examples=300)
def test_sampling_identity(z, p, n):
    # oscillatory terms cancel exactly on the grid tau = n*pi
    secular = eval_secular(z, p, n * math.pi, Y0, EPS)
    sampled = eval_sampled(z, p, n, Y0, EPS)
    # the rounding of tau = n*pi enters sin(2*tau) scaled by the secular
    # prefactor eps^2*tau, so the attainable agreement degrades as eps^2*n^2*ulp
    tol = 50.0 * (1.0 + EPS**2 * n * n) * 1e-16 * (abs(sampled) + 1.0)
    assert abs(secular - sampled) < tol


def test_eval_secular_ordering():
    # the secular correction is O(eps^2 * tau)
    z, p, tau = 0.2, 0.1, 7.3
    base = Y0 * p * p + Y0 * z * z + 2.0 * z**3 / (3.0 * Y0**1.5)
    for eps in (0.05, 0.1, 0.2):
        dev = eval_secular(z, p, tau, Y0, eps) - base
        assert abs(dev) < 2.0 * eps**2 * tau


def test_k_constant_values():
    assert k_constant(SystemParams(1.0, 0.05, 0.2)) == pytest.approx(
        0.04 + 0.016 / 3.0, rel=1e-14
    )
    assert k_constant(SystemParams(1.0, 0.05, 0.25)) == pytest.approx(
        0.0625 + (2.0 / 3.0) * 0.015625, rel=1e-14
    )
    assert k_constant(SystemParams(1.0, 0.05, 1e-300)) == pytest.approx(0.0, abs=1e-30)


def test_k_constant_rejects_nonzero_p0():
    with pytest.raises(ValueError):
        k_constant(SystemParams(1.0, 0.05, 0.2, p0=0.1))


def test_drift_series_unforced():
    params = SystemParams(y0=1.0, eps=0.0, z0=0.2)
    traj = integrate(params, IntegratorConfig(rel_tol=1e-12), tau_end=200.0)
    samples = drift_series(traj, params)
    assert samples[0].rel_drift == 0.0  # n = 0 defines K
    assert all(s.n == i for i, s in enumerate(samples))
    assert max(abs(s.rel_drift) for s in samples) < 1e-8


def test_drift_series_zero_k_reports_absolute():
    params = SystemParams(y0=1.0, eps=0.05, z0=0.0)
    traj = integrate(params, tau_end=50.0)
    samples = drift_series(traj, params)
    assert samples[0].k_ref == 0.0
    # z0 = 0 stays at the origin; absolute drift tiny
    assert max(abs(s.rel_drift) for s in samples) < 1e-12
