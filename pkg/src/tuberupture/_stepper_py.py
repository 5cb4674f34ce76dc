"""Pure-Python stepper core: Dormand-Prince 5(4) with grid hitting.

Fallback twin of the compiled extension ``tuberupture._stepper``; both
expose the same ``integrate_core`` contract and implement the identical
algorithm.  This version runs roughly two orders of magnitude slower and
is selected at import time only when the extension is unavailable.

Two driver modes:

* mode 0 ("exact"):   the joint 5-dim system (y, y', y'', z, p).
* mode 1 ("secular"): (z, p) only, with g(tau) evaluated from the
  second-order perturbation series of the driver (see ``driver``); the
  recorded rows are filled with the series values of (y, y', y'').

Termination codes: 0 reached end, 1 blow-up, 2 step collapse,
3 driver non-positive.
"""

from __future__ import annotations

import math

import numpy as np

# Dormand-Prince 5(4) tableau (FSAL; the fifth-order solution propagates).
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# Difference between the 5th- and 4th-order weights (error estimator).
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0

_SAFETY = 0.9
_FACTOR_MIN = 0.2
_FACTOR_MAX = 5.0

TERM_REACHED_END = 0
TERM_BLOW_UP = 1
TERM_STEP_COLLAPSE = 2
TERM_DRIVER_NON_POSITIVE = 3

MODE_EXACT = 0
MODE_SECULAR = 1


def _driver_series(tau, y0, eps):
    # Twin of driver.driver_series, kept local so the core is standalone.
    beta = y0**-2.5 / 3.0
    a = 5.0 / 48.0 / y0**6
    b = -1.0 / 24.0 / y0**6
    c = 5.0 / 72.0 / y0**6
    d = -7.0 / 288.0 / y0**6
    s1, c1 = math.sin(tau), math.cos(tau)
    s2, c2 = math.sin(2.0 * tau), math.cos(2.0 * tau)
    s3, c3 = math.sin(3.0 * tau), math.cos(3.0 * tau)
    e2 = eps * eps
    y = (
        y0
        + eps * beta * (s1 - 0.5 * s2)
        + e2
        * (
            a * (0.5 * tau * s2 + 0.25 * (c2 - 1.0))
            - (b / 3.0) * (c3 - 1.0)
            - c * (c1 - 1.0)
            - (d / 2.0) * (c2 - 1.0)
        )
    )
    yp = eps * beta * (c1 - c2) + e2 * (a * tau * c2 + b * s3 + c * s1 + d * s2)
    ypp = eps * beta * (-s1 + 2.0 * s2) + e2 * (
        a * c2 - 2.0 * a * tau * s2 + 3.0 * b * c3 + c * c1 + 2.0 * d * c2
    )
    return y, yp, ypp


def _rhs_exact(tau, s, eps, y_floor, out):
    y = s[0]
    if y <= y_floor:
        return False
    g = math.exp(-2.5 * math.log(y))
    out[0] = s[1]
    out[1] = s[2]
    out[2] = eps * g * math.cos(tau) - 4.0 * s[1]
    out[3] = s[4]
    out[4] = -s[3] - g * s[3] * s[3]
    return True


def _rhs_secular(tau, s, y0, eps, y_floor, out):
    y = _driver_series(tau, y0, eps)[0]
    if y <= y_floor:
        return False
    g = math.exp(-2.5 * math.log(y))
    out[0] = s[1]
    out[1] = -s[0] - g * s[0] * s[0]
    return True


def integrate_core(
    y0,
    eps,
    z0,
    p0,
    tau_end,
    rel_tol,
    abs_tol,
    h_init,
    h_min,
    blowup_threshold,
    y_floor,
    dense_stride,
    mode,
):
    """Advance the system from tau = 0 to tau_end.

    Returns (grid, dense, term_code, term_tau, accepted_steps) where grid
    is an (m, 6) array of rows [tau, y, y', y'', z, p] at tau = n*pi for
    n = 0..m-1, and dense holds every dense_stride-th accepted step (empty
    when dense_stride == 0).
    """
    secular = mode == MODE_SECULAR
    nd = 2 if secular else 5
    iz = 0 if secular else 3  # index of z in the state vector
    if secular:
        s = [z0, p0]
        rhs = lambda tau, x, out: _rhs_secular(tau, x, y0, eps, y_floor, out)
    else:
        s = [y0, 0.0, 0.0, z0, p0]
        rhs = lambda tau, x, out: _rhs_exact(tau, x, eps, y_floor, out)

    def row(tau, x):
        if secular:
            y, yp, ypp = _driver_series(tau, y0, eps)
            return [tau, y, yp, ypp, x[0], x[1]]
        return [tau, x[0], x[1], x[2], x[3], x[4]]

    tau = 0.0
    h = h_init
    k1 = [0.0] * nd
    k2 = [0.0] * nd
    k3 = [0.0] * nd
    k4 = [0.0] * nd
    k5 = [0.0] * nd
    k6 = [0.0] * nd
    k7 = [0.0] * nd
    stage = [0.0] * nd
    s_new = [0.0] * nd

    grid = [row(0.0, s)]
    dense = []
    next_n = 1
    accepted = 0
    term_code = TERM_REACHED_END
    term_tau = tau_end

    if not rhs(tau, s, k1):
        return np.array(grid), np.empty((0, 6)), TERM_DRIVER_NON_POSITIVE, tau, accepted

    while tau < tau_end:
        # Clamp the step onto the next grid point n*pi (or tau_end).
        h_try = h
        hit_grid = False
        hit_end = False
        grid_target = next_n * math.pi
        if grid_target <= tau_end + 1e-13 * (1.0 + tau_end) and tau + h_try >= grid_target - 1e-13 * (
            1.0 + grid_target
        ):
            h_try = grid_target - tau
            hit_grid = True
        elif tau + h_try >= tau_end:
            h_try = tau_end - tau
            hit_end = True
        if h_try < h_min:
            term_code = TERM_STEP_COLLAPSE
            term_tau = tau
            break

        for i in range(nd):
            stage[i] = s[i] + h_try * _A21 * k1[i]
        ok = rhs(tau + _C2 * h_try, stage, k2)
        if ok:
            for i in range(nd):
                stage[i] = s[i] + h_try * (_A31 * k1[i] + _A32 * k2[i])
            ok = rhs(tau + _C3 * h_try, stage, k3)
        if ok:
            for i in range(nd):
                stage[i] = s[i] + h_try * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
            ok = rhs(tau + _C4 * h_try, stage, k4)
        if ok:
            for i in range(nd):
                stage[i] = s[i] + h_try * (
                    _A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i]
                )
            ok = rhs(tau + _C5 * h_try, stage, k5)
        if ok:
            for i in range(nd):
                stage[i] = s[i] + h_try * (
                    _A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i]
                )
            ok = rhs(tau + h_try, stage, k6)
        if ok:
            for i in range(nd):
                s_new[i] = s[i] + h_try * (
                    _B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i] + _B6 * k6[i]
                )
            ok = rhs(tau + h_try, s_new, k7)
        if not ok:
            term_code = TERM_DRIVER_NON_POSITIVE
            term_tau = tau
            break

        # Scaled RMS error over the integrated components.
        err_sq = 0.0
        for i in range(nd):
            e = h_try * (
                _E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i]
            )
            ai = abs(s[i])
            bi = abs(s_new[i])
            sc = abs_tol + rel_tol * (ai if ai > bi else bi)
            err_sq += (e / sc) * (e / sc)
        err = math.sqrt(err_sq / nd)
        if math.isnan(err):
            err = math.inf

        if err <= 1.0:
            if hit_grid:
                tau = grid_target
            elif hit_end:
                tau = tau_end
            else:
                tau = tau + h_try
            s, s_new = s_new, s
            k1, k7 = k7, k1
            accepted += 1
            if dense_stride > 0 and (accepted - 1) % dense_stride == 0:
                dense.append(row(tau, s))
            if hit_grid:
                grid.append(row(tau, s))
                next_n += 1
            if abs(s[iz]) >= blowup_threshold:
                term_code = TERM_BLOW_UP
                term_tau = tau
                break
            if err == 0.0:
                factor = _FACTOR_MAX
            else:
                factor = _SAFETY * err**-0.2
                if factor < _FACTOR_MIN:
                    factor = _FACTOR_MIN
                elif factor > _FACTOR_MAX:
                    factor = _FACTOR_MAX
            h = h_try * factor
        else:
            factor = _SAFETY * err**-0.2
            if factor < _FACTOR_MIN:
                factor = _FACTOR_MIN
            h = h_try * factor
            if h < h_min:
                term_code = TERM_STEP_COLLAPSE
                term_tau = tau
                break

    grid_arr = np.array(grid, dtype=float)
    dense_arr = np.array(dense, dtype=float) if dense else np.empty((0, 6))
    return grid_arr, dense_arr, term_code, term_tau, accepted
