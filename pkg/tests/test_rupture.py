import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tuberupture.errors import (
    AngleSingular,
    DegenerateLeadingCoefficient,
    NoPhysicalBranch,
    OracleExhausted,
    ZeroForcing,
    ZeroInitialDisplacement,
)
from tuberupture.model import SystemParams
from tuberupture.rupture import (
    c_const,
    double_root_residual,
    n_crit_closed,
    n_crit_oracle,
    phi_crit,
    polar_cubic,
    predict,
    r_star,
    rupture_function,
    tau_rupt_closed,
    validity_check,
)

P = SystemParams(y0=1.0, eps=0.05, z0=0.2)

# strategies covering the validity region at y0 = 1 (z0 < 0.52 keeps C < 1)
EPS_VALID = st.floats(min_value=0.025, max_value=0.2)
Z0_VALID = st.floats(min_value=0.05, max_value=0.45)


def test_c_const_values():
    assert c_const(1.0, 0.2) == pytest.approx(0.136, rel=1e-14)
    assert c_const(1.0, 0.25) == pytest.approx(0.21875, rel=1e-14)
    assert c_const(1.0, 1e-8) == pytest.approx(3e-16, rel=1e-6)


def test_c_const_errors():
    with pytest.raises(ZeroInitialDisplacement):
        c_const(1.0, 0.0)
    with pytest.raises(ValueError):
        c_const(1.0, -2.0)  # 3*y0^(5/2) + 2*z0 <= 0
    with pytest.raises(ValueError):
        c_const(0.0, 0.2)


def test_polar_cubic_examples():
    cub = polar_cubic(0.0, 0.0, P)
    assert cub.a == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert cub.b == 1.0
    assert cub.d == pytest.approx(-(0.04 + 0.016 / 3.0), rel=1e-14)
    # phi = pi/2 degenerates the cubic to a quadratic
    assert abs(polar_cubic(math.pi / 2, 10.0, P).a) < 1e-14
    # the secular term is proportional to n
    assert polar_cubic(1.1, 0.0, P).b == P.y0


def test_polar_cubic_d_negative_for_positive_z0():
    for z0 in (0.05, 0.2, 0.45):
        params = SystemParams(1.0, 0.05, z0)
        assert polar_cubic(0.3, 5.0, params).d < 0


def test_double_root_residual_closed_tube_at_n0():
    cub = polar_cubic(0.0, 0.0, P)
    res = double_root_residual(cub)
    assert res == pytest.approx(-0.0453333333 + (4.0 / 27.0) / (4.0 / 9.0), rel=1e-6)
    assert res > 0  # closed tube at n = 0


def test_degenerate_leading_coefficient():
    cub = polar_cubic(math.pi / 2, 0.0, P)
    with pytest.raises(DegenerateLeadingCoefficient):
        double_root_residual(cub)
    with pytest.raises(DegenerateLeadingCoefficient):
        r_star(cub)


def test_r_star_signs():
    assert r_star(polar_cubic(0.0, 0.0, P)) == pytest.approx(-1.0, rel=1e-14)
    # third quadrant: a < 0, and b > 0 at moderate n, so r* > 0
    assert r_star(polar_cubic(math.pi + 0.6, 100.0, P)) > 0


def test_rupture_function_reference_value():
    # n(pi/4) = (96 / (5*pi*eps^2)) * (1 - C^(1/3)/2)
    val = rupture_function(math.pi / 4, P)
    assert val == pytest.approx(1816.0, rel=1e-3)


def test_rupture_function_errors():
    with pytest.raises(AngleSingular):
        rupture_function(math.pi / 2, P)
    with pytest.raises(AngleSingular):
        rupture_function(0.0, P)
    with pytest.raises(ZeroForcing):
        rupture_function(0.3, SystemParams(1.0, 0.0, 0.2))


@given(phi=st.floats(min_value=0.05, max_value=math.pi - 0.05))
@settings(max_examples=100)
def test_rupture_function_pi_shift(phi):
    if abs(math.sin(2 * phi)) < 1e-6:
        return
    a = rupture_function(phi, P)
    b = rupture_function(phi + math.pi, P)
    assert a == pytest.approx(b, rel=1e-12)


@given(phi=st.floats(min_value=0.05, max_value=math.pi / 2 - 0.05))
@settings(max_examples=100)
def test_rupture_function_sign_follows_sin2phi(phi):
    # numerator >= y0 - C^(1/3) > 0 inside validity
    assert rupture_function(phi, P) > 0
    assert rupture_function(math.pi - phi, P) < 0


def test_phi_crit_reference_angles():
    angles = phi_crit(1.0, 0.2)
    assert len(angles) == 4
    phi0 = math.acos(math.sqrt(1.0 / (2.0 - 0.136 ** (1.0 / 3.0))))
    assert angles == pytest.approx(
        [phi0, math.pi - phi0, math.pi + phi0, 2 * math.pi - phi0], rel=1e-12
    )
    assert phi0 == pytest.approx(0.6089, abs=5e-4)


def test_phi_crit_small_c_limit():
    angles = phi_crit(1.0, 1e-5)
    assert angles[0] == pytest.approx(math.pi / 4, rel=1e-2)


def test_phi_crit_no_real_extremum():
    # z0 = 0.6 gives C = 0.36*4.2 = 1.512 > 1 = y0^3
    from tuberupture.errors import NoRealExtremum

    with pytest.raises(NoRealExtremum):
        phi_crit(1.0, 0.6)


def test_closed_form_reference_times():
    expected = {0.025: 21411.0, 0.05: 5353.7, 0.10: 1338.2, 0.15: 594.8, 0.20: 334.5}
    for eps, tau in expected.items():
        params = SystemParams(1.0, eps, 0.2)
        assert tau_rupt_closed(params) == pytest.approx(tau, rel=1e-3)
        assert tau_rupt_closed(params) == math.pi * n_crit_closed(params)


def test_eps_scaling_is_exact():
    a = tau_rupt_closed(SystemParams(1.0, 0.1, 0.2))
    b = tau_rupt_closed(SystemParams(1.0, 0.05, 0.2))
    assert b == pytest.approx(4.0 * a, rel=1e-14)


def test_predict_reference_report():
    r = predict(P)
    assert r.branch == "ThirdQuadrant"
    assert r.phi_crit == pytest.approx(math.pi + 0.6089, abs=5e-4)
    assert r.n_crit == pytest.approx(n_crit_closed(P), rel=1e-9)
    assert r.tau_rupt == math.pi * r.n_crit
    assert r.r_star > 0
    assert r.z_at_rupture < 0
    assert r.valid
    assert len(r.candidates) == 4
    rejected = [c for c in r.candidates if not c.accepted]
    assert len(rejected) == 3
    assert all(c.reason != "accepted" for c in rejected)
    # the first-quadrant candidate fails on the radius sign
    first_q = min(r.candidates, key=lambda c: c.phi)
    assert not first_q.accepted and "radius" in first_q.reason


@given(eps=EPS_VALID, z0=Z0_VALID)
@settings(max_examples=100, deadline=None)
def test_extremum_identity(eps, z0):
    # the closed-form angle substituted back into n(phi) gives n_crit
    params = SystemParams(1.0, eps, z0)
    phi = phi_crit(1.0, z0)[2]  # third-quadrant branch
    assert rupture_function(phi, params) == pytest.approx(
        n_crit_closed(params), rel=1e-12
    )


@given(eps=EPS_VALID, z0=Z0_VALID)
@settings(max_examples=60, deadline=None)
def test_rupture_direction_positive_z0(eps, z0):
    r = predict(SystemParams(1.0, eps, z0))
    assert r.r_star > 0
    assert r.z_at_rupture < 0


def test_double_root_certificate():
    r = predict(P)
    cub = polar_cubic(r.phi_crit, r.n_crit, P)
    rs = r_star(cub)
    res = double_root_residual(cub)
    scale = abs(cub.d)
    assert abs(res) / scale < 1e-9
    F = cub.a * rs**3 + cub.b * rs**2 + cub.d
    Fp = 3.0 * cub.a * rs**2 + 2.0 * cub.b * rs
    assert abs(F) / scale < 1e-9
    assert abs(Fp) / scale < 1e-9
    roots = np.sort(np.roots([cub.a, cub.b, 0.0, cub.d]).real)
    # repeated positive root plus one negative root
    assert roots[0] < 0
    assert roots[1] == pytest.approx(roots[2], rel=1e-6)
    assert roots[1] == pytest.approx(rs, rel=1e-6)


def test_validity_check_values():
    # reference figures are quoted to ~4 decimals with rounded cube roots
    inside, margin = validity_check(1.0, 0.2)
    assert inside and margin == pytest.approx(0.48595, abs=5e-4)
    assert margin == pytest.approx(1.0 - 0.136 ** (1.0 / 3.0), rel=1e-14)
    inside, margin = validity_check(1.0, 0.25)
    assert inside and margin == pytest.approx(0.39727, abs=5e-4)
    inside, _ = validity_check(2.0, 1e-9)
    assert not inside  # y0^2 = 4 > 1 in the z0 -> 0 limit


def test_oracle_matches_closed_form():
    n_o = n_crit_oracle(P, phi_grid_size=20_000)
    assert abs(n_o - n_crit_closed(P)) / n_crit_closed(P) < 1e-3
    p2 = SystemParams(1.0, 0.2, 0.2)
    assert n_crit_oracle(p2, phi_grid_size=20_000) == pytest.approx(
        334.5 / math.pi, rel=1e-3
    )


def test_oracle_exhausted_for_zero_forcing():
    with pytest.raises(OracleExhausted):
        n_crit_oracle(SystemParams(1.0, 0.0, 0.2), phi_grid_size=2_000, n_max=1e5)


def test_oracle_zero_displacement():
    with pytest.raises(ZeroInitialDisplacement):
        n_crit_oracle(SystemParams(1.0, 0.05, 0.0))


def test_closed_form_vs_oracle_grid():
    # 5x5 grid across the validity region at y0 = 1
    for eps in np.linspace(0.025, 0.2, 5):
        for z0 in np.linspace(0.1, 0.4, 5):
            params = SystemParams(1.0, float(eps), float(z0))
            closed = n_crit_closed(params)
            oracle = n_crit_oracle(params, phi_grid_size=20_000)
            assert abs(closed - oracle) / closed < 1e-3
