"""Exception hierarchy shared across the package."""


class CouetteError(Exception):
    """Base class for all package errors."""


class ValidationError(CouetteError, ValueError):
    """Bad user input: grid sizes, parameter ranges, config files."""


class NumericalError(CouetteError, RuntimeError):
    """A computation failed to meet its accuracy or stability contract."""


class OffGridShiftError(NumericalError):
    """Sheared frequencies xi - k*t left the resolved band under the
    'abort' policy."""

    def __init__(self, n_modes, lost_mass, t):
        self.n_modes = n_modes
        self.lost_mass = lost_mass
        self.t = t
        super().__init__(
            f"{n_modes} modes shifted off-grid at t={t:g} "
            f"(mass {lost_mass:.3e}); rerun with a taller box or "
            f"shift_policy='truncate'"
        )


class StepRejected(NumericalError):
    """CFL violation; carries a suggested stable time step."""

    def __init__(self, cfl, suggested_dt):
        self.cfl = cfl
        self.suggested_dt = suggested_dt
        super().__init__(
            f"CFL number {cfl:.3f} > 0.5; suggested dt <= {suggested_dt:.3e}"
        )


class WeightOverflowError(NumericalError):
    """A per-mode norm weight exceeded the overflow guard."""

    def __init__(self, k, weight):
        self.k = k
        self.weight = weight
        super().__init__(f"weight {weight:.3e} at k={k:g} exceeds 1e300")


class QuadratureError(NumericalError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, achieved, requested):
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"quadrature reached {achieved:.3e}, requested {requested:.3e}"
        )


class BracketInvalid(ValidationError):
    """Bisection endpoints do not classify differently."""
