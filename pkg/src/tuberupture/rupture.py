"""Closed-form rupture prediction from the polar form of the sampled invariant.

Writing z = r cos(phi), p = r sin(phi) turns each temporal slice of the
sampled invariant into a cubic in the radius,

    A(phi) r^3 + B(phi, n) r^2 + D = 0,

whose discriminant vanishes when the slice first develops a double root:
that event is the rupture of the tube.  Minimizing the resulting rupture
function n(phi) over the angle gives the critical index n_crit and the
rupture time tau_rupt = pi * n_crit in closed form.

A brute-force oracle (discriminant bisection over a dense phi grid) checks
the closed form independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AngleSingular,
    DegenerateLeadingCoefficient,
    NoPhysicalBranch,
    NoRealExtremum,
    OracleExhausted,
    ZeroForcing,
    ZeroInitialDisplacement,
)
from .model import SystemParams

#: |a| below this is treated as a degenerate (quadratic) slice.
A_DEGENERATE = 1e-14
#: Angles with |sin 2*phi| below this are singular for the rupture function.
SIN2PHI_SINGULAR = 1e-12
#: The oracle's phi grid excludes |sin 2*phi| below this wider guard.
SIN2PHI_ORACLE = 1e-6

BRANCH_FIRST = "FirstQuadrant"
BRANCH_THIRD = "ThirdQuadrant"


@dataclass(frozen=True)
class PolarCubic:
    """One radial slice A r^3 + B r^2 + D = 0 at angle phi, index n."""

    a: float
    b: float
    d: float
    phi: float
    n: float


@dataclass(frozen=True)
class Candidate:
    """One critical angle with its rupture index, radius, and verdict."""

    phi: float
    n: float
    r_star: float
    accepted: bool
    reason: str


@dataclass(frozen=True)
class RuptureReport:
    """Closed-form rupture prediction with the full candidate audit trail."""

    c_const: float
    phi_crit: float
    n_crit: float
    tau_rupt: float
    r_star: float
    z_at_rupture: float
    branch: str
    valid: bool
    margin: float
    candidates: list[Candidate]


def c_const(y0: float, z0: float) -> float:
    """The positive constant C = z0^2 (3 y0^(5/2) + 2 z0) / y0^(9/2)."""
    if not y0 > 0:
        raise ValueError(f"y0 must be positive, got {y0}")
    if z0 == 0.0:
        raise ZeroInitialDisplacement(
            "z0 = 0 degenerates the rupture condition (C = 0; the trajectory "
            "is the origin and never ruptures)"
        )
    if not 3.0 * y0**2.5 + 2.0 * z0 > 0:
        raise ValueError("require 3*y0^(5/2) + 2*z0 > 0 for C > 0")
    return z0 * z0 * (3.0 * y0**2.5 + 2.0 * z0) / y0**4.5


def polar_cubic(phi: float, n: float, params: SystemParams) -> PolarCubic:
    """Coefficients of the radial cubic at angle phi and sample index n."""
    y0, eps, z0 = params.y0, params.eps, params.z0
    a = 2.0 / (3.0 * y0**1.5) * math.cos(phi) ** 3
    b = y0 - 5.0 * n * math.pi * eps * eps / (96.0 * y0**6) * math.sin(2.0 * phi)
    d = -y0 * z0 * z0 - 2.0 * z0**3 / (3.0 * y0**1.5)
    return PolarCubic(a=a, b=b, d=d, phi=phi, n=n)


def double_root_residual(cubic: PolarCubic) -> float:
    """D + (4/27) B^3 / A^2: zero iff the slice has the double root r*."""
    if abs(cubic.a) < A_DEGENERATE:
        raise DegenerateLeadingCoefficient(
            f"|A| = {abs(cubic.a):.3e} at phi = {cubic.phi}: slice is quadratic"
        )
    return cubic.d + (4.0 / 27.0) * cubic.b**3 / (cubic.a * cubic.a)


def r_star(cubic: PolarCubic) -> float:
    """The double-root radius candidate r* = -2B / (3A)."""
    if abs(cubic.a) < A_DEGENERATE:
        raise DegenerateLeadingCoefficient(
            f"|A| = {abs(cubic.a):.3e} at phi = {cubic.phi}: slice is quadratic"
        )
    return -2.0 * cubic.b / (3.0 * cubic.a)


def rupture_function(phi: float, params: SystemParams) -> float:
    """n(phi): the (continuous) index at which the slice at phi ruptures.

    May be negative, which marks an unphysical branch at that angle.
    """
    if params.eps == 0.0:
        raise ZeroForcing("eps = 0: the tube never ruptures (n(phi) infinite)")
    s2 = math.sin(2.0 * phi)
    if abs(s2) < SIN2PHI_SINGULAR:
        raise AngleSingular(f"|sin 2*phi| < {SIN2PHI_SINGULAR} at phi = {phi}")
    y0 = params.y0
    c3 = c_const(y0, params.z0) ** (1.0 / 3.0)
    return (
        96.0 * y0**6 / (5.0 * math.pi * params.eps**2)
        * (y0 - c3 * math.cos(phi) ** 2)
        / s2
    )


def phi_crit(y0: float, z0: float) -> list[float]:
    """The four angles in (0, 2*pi) with cos^2(phi) = y0 / (2 y0 - C^(1/3)).

    Branch selection downstream picks the physical one; here they are just
    returned in increasing order.
    """
    c3 = c_const(y0, z0) ** (1.0 / 3.0)
    if c3 >= y0:
        raise NoRealExtremum(
            f"C^(1/3) = {c3:.6g} >= y0 = {y0}: no interior extremum of n(phi)"
        )
    phi0 = math.acos(math.sqrt(y0 / (2.0 * y0 - c3)))
    return [phi0, math.pi - phi0, math.pi + phi0, 2.0 * math.pi - phi0]


def n_crit_closed(params: SystemParams) -> float:
    """Closed-form critical index (96 y0^6 / 5 pi eps^2) sqrt(y0 (y0 - C^(1/3))).

    The product form y0*(y0 - C^(1/3)) is used throughout; it reproduces the
    reference rupture times and never takes a spurious square root of a
    negative product inside the validity region.
    """
    if params.eps == 0.0:
        raise ZeroForcing("eps = 0: rupture time is infinite")
    y0 = params.y0
    c3 = c_const(y0, params.z0) ** (1.0 / 3.0)
    if c3 >= y0:
        raise NoRealExtremum(
            f"C^(1/3) = {c3:.6g} >= y0 = {y0}: closed form not applicable"
        )
    return 96.0 * y0**6 / (5.0 * math.pi * params.eps**2) * math.sqrt(y0 * (y0 - c3))


def tau_rupt_closed(params: SystemParams) -> float:
    """Closed-form rupture time tau = pi * n_crit."""
    return math.pi * n_crit_closed(params)


def validity_check(y0: float, z0: float) -> tuple[bool, float]:
    """(inside, margin) for the condition y0 (y0 - C^(1/3)) < 1.

    margin is the value y0 (y0 - C^(1/3)) itself; inside means margin < 1.
    """
    try:
        c3 = c_const(y0, z0) ** (1.0 / 3.0)
    except ZeroInitialDisplacement:
        c3 = 0.0
    margin = y0 * (y0 - c3)
    return margin < 1.0, margin


def _quadrant_label(phi: float) -> str:
    if 0.0 < phi < 0.5 * math.pi:
        return BRANCH_FIRST
    if math.pi < phi < 1.5 * math.pi:
        return BRANCH_THIRD
    return f"Other(({phi / math.pi:.3f})*pi)"


def select_branch(candidates: list[Candidate], params: SystemParams) -> RuptureReport:
    """Pick the physical rupture branch from the critical-angle candidates.

    Acceptance requires a positive double-root radius, a rupture side
    opposite in sign to z0, and the minimal positive rupture index; every
    rejection is recorded with its reason.
    """
    accepted = [c for c in candidates if c.accepted]
    if not accepted:
        raise NoPhysicalBranch(
            "all critical-angle candidates rejected: "
            + "; ".join(f"phi={c.phi:.4f}: {c.reason}" for c in candidates)
        )
    best = min(accepted, key=lambda c: (c.n, c.phi))
    valid, margin = validity_check(params.y0, params.z0)
    return RuptureReport(
        c_const=c_const(params.y0, params.z0),
        phi_crit=best.phi,
        n_crit=best.n,
        tau_rupt=math.pi * best.n,
        r_star=best.r_star,
        z_at_rupture=best.r_star * math.cos(best.phi),
        branch=_quadrant_label(best.phi),
        valid=valid,
        margin=margin,
        candidates=candidates,
    )


def predict(params: SystemParams) -> RuptureReport:
    """Full closed-form rupture prediction with branch audit."""
    sign_z0 = math.copysign(1.0, params.z0)
    candidates = []
    for phi in phi_crit(params.y0, params.z0):
        n = rupture_function(phi, params)
        rs = r_star(polar_cubic(phi, n, params))
        if n <= 0.0:
            cand = Candidate(phi, n, rs, False, "rupture index not positive")
        elif rs <= 0.0:
            cand = Candidate(phi, n, rs, False, "double-root radius not positive")
        elif math.copysign(1.0, rs * math.cos(phi)) == sign_z0:
            cand = Candidate(phi, n, rs, False, "rupture on the same side as z0")
        else:
            cand = Candidate(phi, n, rs, True, "accepted")
        candidates.append(cand)
    return select_branch(candidates, params)


def n_crit_oracle(
    params: SystemParams,
    phi_grid_size: int = 100_000,
    n_max: float = 1e7,
) -> float:
    """Brute-force critical index, independent of the closed form.

    Scans a uniform phi grid (excluding near-singular angles), bisects the
    cubic discriminant -4 B^3 D - 27 A^2 D^2 in n to locate the first double
    root per angle, keeps angles whose double root has r* > 0, and returns
    the minimal rupture index (lowest-phi tie-break via the argmin order).
    """
    y0, eps, z0 = params.y0, params.eps, params.z0
    if z0 == 0.0:
        raise ZeroInitialDisplacement("z0 = 0: the trajectory never ruptures")
    phi = np.linspace(0.0, 2.0 * math.pi, phi_grid_size, endpoint=False)
    s2 = np.sin(2.0 * phi)
    keep = np.abs(s2) >= SIN2PHI_ORACLE
    phi, s2 = phi[keep], s2[keep]

    a = 2.0 / (3.0 * y0**1.5) * np.cos(phi) ** 3
    d = -y0 * z0 * z0 - 2.0 * z0**3 / (3.0 * y0**1.5)
    slope = 5.0 * math.pi * eps * eps / (96.0 * y0**6) * s2  # b = y0 - slope*n

    def disc(n):
        b = y0 - slope * n
        return -4.0 * b**3 * d - 27.0 * a * a * d * d

    d0 = disc(0.0)
    d1 = disc(n_max)
    bracket = (d0 > 0.0) & (d1 <= 0.0)
    if not bracket.any():
        raise OracleExhausted(f"no discriminant sign change below n_max = {n_max}")

    lo = np.zeros(bracket.sum())
    hi = np.full(bracket.sum(), float(n_max))
    a_b, slope_b, phi_b = a[bracket], slope[bracket], phi[bracket]

    def disc_b(n):
        b = y0 - slope_b * n
        return -4.0 * b**3 * d - 27.0 * a_b * a_b * d * d

    for _ in range(80):  # 80 halvings: interval below n_max * 1e-24
        mid = 0.5 * (lo + hi)
        pos = disc_b(mid) > 0.0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    n_root = 0.5 * (lo + hi)

    b_root = y0 - slope_b * n_root
    rs = -2.0 * b_root / (3.0 * a_b)
    physical = rs > 0.0
    if not physical.any():
        raise OracleExhausted("no double root with positive radius below n_max")
    n_phys = n_root[physical]
    return float(n_phys[np.argmin(n_phys)])
