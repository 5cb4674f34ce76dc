"""Parameters, state vectors, and right-hand sides of the coupled system.

The oscillator z'' + z + g(tau) z^2 = 0 is driven through
g(tau) = y(tau)**(-5/2), where y solves the weakly forced third-order
equation y''' + 4 y' = eps * y**(-5/2) * cos(tau) with y(0) = y0,
y'(0) = y''(0) = 0.  Both equations are integrated jointly as one
first-order system in (y, y', y'', z, p) with p = z'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DriverNonPositive

#: Below this floor the driver is treated as non-positive and integration
#: aborts; g(tau) = y**(-5/2) is meaningless for y <= 0.
Y_FLOOR = 1e-8


@dataclass(frozen=True)
class SystemParams:
    """The triple (y0, eps, z0) plus p0, fully determining the dynamics.

    p0 defaults to 0, the convention used throughout the rupture analysis.
    """

    y0: float
    eps: float
    z0: float
    p0: float = 0.0

    def __post_init__(self):
        if not self.y0 > 0:
            raise ValueError(f"y0 must be strictly positive, got {self.y0}")
        if self.eps < 0:
            raise ValueError(f"eps must be nonnegative, got {self.eps}")


@dataclass(frozen=True)
class ExtendedState:
    """Joint integration state (y, y', y'', z, p) at time tau."""

    tau: float
    y: float
    yp: float
    ypp: float
    z: float
    p: float


def g_coefficient(y: float, tau: float = 0.0) -> float:
    """y**(-5/2), guarded by the positivity floor."""
    if y <= Y_FLOOR:
        raise DriverNonPositive(tau, y)
    return math.exp(-2.5 * math.log(y))


def rhs(state: ExtendedState, params: SystemParams) -> tuple[float, float, float, float, float]:
    """Derivative of (y, y', y'', z, p); the tau-derivative is 1 implicitly.

    Returns (y', y'', eps*y**(-5/2)*cos(tau) - 4*y', p, -z - y**(-5/2)*z**2).
    Raises DriverNonPositive if y is at or below the floor.
    """
    g = g_coefficient(state.y, state.tau)
    return (
        state.yp,
        state.ypp,
        params.eps * g * math.cos(state.tau) - 4.0 * state.yp,
        state.p,
        -state.z - g * state.z * state.z,
    )


def initial_state(params: SystemParams) -> ExtendedState:
    """State at tau = 0: (y0, 0, 0, z0, p0)."""
    return ExtendedState(tau=0.0, y=params.y0, yp=0.0, ypp=0.0, z=params.z0, p=params.p0)
