# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepper core: Dormand-Prince 5(4) with grid hitting.

Twin of ``tuberupture._stepper_py``; both expose the same
``integrate_core`` contract and implement the identical algorithm.  Keep
the two in lockstep — the parity test compares their outputs step for
step.
"""

import numpy as np

from libc.math cimport cos, exp, fabs, isnan, log, sin, sqrt

# Dormand-Prince 5(4) tableau (FSAL; the fifth-order solution propagates).
cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0, _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0, _A42 = -56.0 / 15.0, _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0, _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0, _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0, _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0, _A64 = 49.0 / 176.0, _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0, _B3 = 500.0 / 1113.0, _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0, _B6 = 11.0 / 84.0
# Difference between the 5th- and 4th-order weights (error estimator).
cdef double _E1 = 71.0 / 57600.0, _E3 = -71.0 / 16695.0, _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0, _E6 = 22.0 / 525.0, _E7 = -1.0 / 40.0
cdef double _C2 = 1.0 / 5.0, _C3 = 3.0 / 10.0, _C4 = 4.0 / 5.0, _C5 = 8.0 / 9.0

cdef double _SAFETY = 0.9
cdef double _FACTOR_MIN = 0.2
cdef double _FACTOR_MAX = 5.0
cdef double _PI = 3.141592653589793

TERM_REACHED_END = 0
TERM_BLOW_UP = 1
TERM_STEP_COLLAPSE = 2
TERM_DRIVER_NON_POSITIVE = 3

MODE_EXACT = 0
MODE_SECULAR = 1


cdef void _driver_series(double tau, double y0, double eps, double* out) noexcept:
    # Twin of driver.driver_series; out receives (y, y', y'').
    cdef double beta = y0 ** -2.5 / 3.0
    cdef double a = 5.0 / 48.0 / y0 ** 6
    cdef double b = -1.0 / 24.0 / y0 ** 6
    cdef double c = 5.0 / 72.0 / y0 ** 6
    cdef double d = -7.0 / 288.0 / y0 ** 6
    cdef double s1 = sin(tau), c1 = cos(tau)
    cdef double s2 = sin(2.0 * tau), c2 = cos(2.0 * tau)
    cdef double s3 = sin(3.0 * tau), c3 = cos(3.0 * tau)
    cdef double e2 = eps * eps
    out[0] = (
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
    out[1] = eps * beta * (c1 - c2) + e2 * (a * tau * c2 + b * s3 + c * s1 + d * s2)
    out[2] = eps * beta * (-s1 + 2.0 * s2) + e2 * (
        a * c2 - 2.0 * a * tau * s2 + 3.0 * b * c3 + c * c1 + 2.0 * d * c2
    )


cdef bint _rhs(
    double tau, double* s, double* out,
    bint secular, double y0, double eps, double y_floor,
) noexcept:
    cdef double y, g
    cdef double dser[3]
    if secular:
        _driver_series(tau, y0, eps, dser)
        y = dser[0]
        if y <= y_floor:
            return False
        g = exp(-2.5 * log(y))
        out[0] = s[1]
        out[1] = -s[0] - g * s[0] * s[0]
    else:
        y = s[0]
        if y <= y_floor:
            return False
        g = exp(-2.5 * log(y))
        out[0] = s[1]
        out[1] = s[2]
        out[2] = eps * g * cos(tau) - 4.0 * s[1]
        out[3] = s[4]
        out[4] = -s[3] - g * s[3] * s[3]
    return True


def integrate_core(
    double y0,
    double eps,
    double z0,
    double p0,
    double tau_end,
    double rel_tol,
    double abs_tol,
    double h_init,
    double h_min,
    double blowup_threshold,
    double y_floor,
    int dense_stride,
    int mode,
):
    """Advance the system from tau = 0 to tau_end.

    Returns (grid, dense, term_code, term_tau, accepted_steps); see the
    pure-Python twin for the full contract.
    """
    cdef bint secular = mode == MODE_SECULAR
    cdef int nd = 2 if secular else 5
    cdef int iz = 0 if secular else 3  # index of z in the state vector
    cdef double s[5]
    cdef double s_new[5]
    cdef double k1[5]
    cdef double k2[5]
    cdef double k3[5]
    cdef double k4[5]
    cdef double k5[5]
    cdef double k6[5]
    cdef double k7[5]
    cdef double stage[5]
    cdef double dser[3]
    cdef int i
    if secular:
        s[0] = z0
        s[1] = p0
    else:
        s[0] = y0
        s[1] = 0.0
        s[2] = 0.0
        s[3] = z0
        s[4] = p0

    def row(double tau_r):
        if secular:
            _driver_series(tau_r, y0, eps, dser)
            return [tau_r, dser[0], dser[1], dser[2], s[0], s[1]]
        return [tau_r, s[0], s[1], s[2], s[3], s[4]]

    cdef double tau = 0.0
    cdef double h = h_init
    grid = [row(0.0)]
    dense = []
    cdef long next_n = 1
    cdef long accepted = 0
    cdef int term_code = TERM_REACHED_END
    cdef double term_tau = tau_end
    cdef double h_try, grid_target, err_sq, err, e, ai, bi, sc, factor, tmp
    cdef bint hit_grid, hit_end, ok

    if not _rhs(tau, s, k1, secular, y0, eps, y_floor):
        return np.array(grid), np.empty((0, 6)), TERM_DRIVER_NON_POSITIVE, tau, accepted

    while tau < tau_end:
        # Clamp the step onto the next grid point n*pi (or tau_end).
        h_try = h
        hit_grid = False
        hit_end = False
        grid_target = next_n * _PI
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
        ok = _rhs(tau + _C2 * h_try, stage, k2, secular, y0, eps, y_floor)
        if ok:
            for i in range(nd):
                stage[i] = s[i] + h_try * (_A31 * k1[i] + _A32 * k2[i])
            ok = _rhs(tau + _C3 * h_try, stage, k3, secular, y0, eps, y_floor)
        if ok:
            for i in range(nd):
                stage[i] = s[i] + h_try * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
            ok = _rhs(tau + _C4 * h_try, stage, k4, secular, y0, eps, y_floor)
        if ok:
            for i in range(nd):
                stage[i] = s[i] + h_try * (
                    _A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i]
                )
            ok = _rhs(tau + _C5 * h_try, stage, k5, secular, y0, eps, y_floor)
        if ok:
            for i in range(nd):
                stage[i] = s[i] + h_try * (
                    _A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i]
                )
            ok = _rhs(tau + h_try, stage, k6, secular, y0, eps, y_floor)
        if ok:
            for i in range(nd):
                s_new[i] = s[i] + h_try * (
                    _B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i] + _B6 * k6[i]
                )
            ok = _rhs(tau + h_try, s_new, k7, secular, y0, eps, y_floor)
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
            ai = fabs(s[i])
            bi = fabs(s_new[i])
            sc = abs_tol + rel_tol * (ai if ai > bi else bi)
            err_sq += (e / sc) * (e / sc)
        err = sqrt(err_sq / nd)
        if isnan(err):
            err = 1e300

        if err <= 1.0:
            if hit_grid:
                tau = grid_target
            elif hit_end:
                tau = tau_end
            else:
                tau = tau + h_try
            for i in range(nd):
                tmp = s[i]
                s[i] = s_new[i]
                s_new[i] = tmp
                tmp = k1[i]
                k1[i] = k7[i]
                k7[i] = tmp
            accepted += 1
            if dense_stride > 0 and (accepted - 1) % dense_stride == 0:
                dense.append(row(tau))
            if hit_grid:
                grid.append(row(tau))
                next_n += 1
            if fabs(s[iz]) >= blowup_threshold:
                term_code = TERM_BLOW_UP
                term_tau = tau
                break
            if err == 0.0:
                factor = _FACTOR_MAX
            else:
                factor = _SAFETY * err ** -0.2
                if factor < _FACTOR_MIN:
                    factor = _FACTOR_MIN
                elif factor > _FACTOR_MAX:
                    factor = _FACTOR_MAX
            h = h_try * factor
        else:
            factor = _SAFETY * err ** -0.2
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
