"""Exception types raised by the solver."""


class PhysicsDomainError(ValueError):
    """Input lies outside the domain where a quantity is defined."""


class RadiusDomainError(PhysicsDomainError):
    """Radius must be strictly positive."""


class DegenerateIndexError(PhysicsDomainError):
    """sigma_nm vanished, so the Coulomb energy and rho are undefined."""


class WavefunctionUndefinedError(PhysicsDomainError):
    """sigma_0m <= 0: r**sigma_0m is not normalisable at the origin."""


class UnboundedPotentialError(PhysicsDomainError):
    """Electric field present: -F r has no bound states without a box."""


class QuadratureError(RuntimeError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
