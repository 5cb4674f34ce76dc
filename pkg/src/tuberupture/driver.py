"""Second-order perturbation series of the driver y(tau).

The driver solves y''' + 4 y' = eps * y**(-5/2) * cos(tau) with
y(0) = y0, y'(0) = y''(0) = 0.  Expanding y = y0 + eps*y1 + eps^2*y2 and
solving order by order (the operator acting on y' is d^2/dtau^2 + 4, so
homogeneous responses oscillate at frequency 2):

    y1  = (sin(tau) - sin(2*tau)/2) / (3*y0^(5/2))

and at second order the sin(2*tau) component of the forcing is resonant,
producing the secular term (5/96) * y0^-6 * tau * sin(2*tau) that drives
the slow deformation of the invariant tube.

The rupture theory, the invariant's secular coefficients, and the
reference blow-up times are all built on this truncated driver; the
integrator's "secular" mode closes the loop by forcing the oscillator
with g(tau) = y_s(tau)**(-5/2).  Unlike the exact driver, y_s is not
protected by a positivity proof: its secular amplitude grows without
bound, which is precisely what ruptures the tube in finite time.
"""

from __future__ import annotations

import math


def driver_series(tau: float, y0: float, eps: float) -> tuple[float, float, float]:
    """(y_s, y_s', y_s'') of the second-order driver expansion at tau."""
    if not y0 > 0:
        raise ValueError(f"y0 must be positive, got {y0}")
    beta = y0**-2.5 / 3.0
    a = 5.0 / 48.0 / y0**6
    b = -1.0 / 24.0 / y0**6
    c = 5.0 / 72.0 / y0**6
    d = -7.0 / 288.0 / y0**6

    s1, c1 = math.sin(tau), math.cos(tau)
    s2, c2 = math.sin(2.0 * tau), math.cos(2.0 * tau)
    s3, c3 = math.sin(3.0 * tau), math.cos(3.0 * tau)

    y1 = beta * (s1 - 0.5 * s2)
    y1p = beta * (c1 - c2)
    y1pp = beta * (-s1 + 2.0 * s2)

    y2 = a * (0.5 * tau * s2 + 0.25 * (c2 - 1.0)) - (b / 3.0) * (c3 - 1.0) - c * (c1 - 1.0) - (
        d / 2.0
    ) * (c2 - 1.0)
    y2p = a * tau * c2 + b * s3 + c * s1 + d * s2
    y2pp = a * c2 - 2.0 * a * tau * s2 + 3.0 * b * c3 + c * c1 + 2.0 * d * c2

    e2 = eps * eps
    return (
        y0 + eps * y1 + e2 * y2,
        eps * y1p + e2 * y2p,
        eps * y1pp + e2 * y2pp,
    )
