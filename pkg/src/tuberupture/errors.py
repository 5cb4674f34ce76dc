"""Exception types shared across the package."""


class TubeRuptureError(Exception):
    """Base class for all errors raised by this package."""


class DriverNonPositive(TubeRuptureError):
    """The driver variable y dropped to or below its positivity floor."""

    def __init__(self, tau: float, y: float):
        self.tau = tau
        self.y = y
        super().__init__(f"driver y = {y!r} non-positive at tau = {tau!r}")


class OutOfRange(TubeRuptureError):
    """A requested grid index is outside the recorded range."""


class ZeroInitialDisplacement(TubeRuptureError):
    """z0 = 0 degenerates the rupture condition (C = 0)."""


class ZeroForcing(TubeRuptureError):
    """eps = 0 makes the rupture time infinite."""


class AngleSingular(TubeRuptureError):
    """The rupture function is singular at this angle (sin 2*phi = 0)."""


class NoRealExtremum(TubeRuptureError):
    """C**(1/3) > y0: the closed-form extremum condition has no real angle."""


class DegenerateLeadingCoefficient(TubeRuptureError):
    """The radial cubic degenerates (|A| too small, angle near pi/2 + k*pi)."""


class NoPhysicalBranch(TubeRuptureError):
    """Every candidate rupture angle was rejected by the branch criteria."""


class OracleExhausted(TubeRuptureError):
    """The brute-force rupture search found no rupture below n_max."""


class EmptySection(TubeRuptureError):
    """No level-set points of the sampled invariant inside the window."""


class SchemaMismatch(TubeRuptureError):
    """A CSV file does not match any known output schema."""
