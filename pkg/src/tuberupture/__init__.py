"""Rupture prediction and simulation for tube-confined nonlinear oscillation.

An oscillator z'' + z + g(tau) z^2 = 0 forced through g(tau) = y(tau)**(-5/2)
stays confined to a closed invariant tube in (z, p, tau) until a secular
deformation opens the tube; this package integrates the system, monitors the
algebraic invariant, and predicts the rupture time in closed form.
"""

from .integrator import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
