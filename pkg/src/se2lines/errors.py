"""Exception hierarchy shared by the numerical modules and the CLI."""


class PreconditionError(ValueError):
    """Input violates a documented precondition (CLI exit code 2)."""


class SeparatrixError(PreconditionError):
    """Momentum too close to R = 1, where the theta-period diverges."""


class OffLevelError(PreconditionError):
    """Reduced initial condition is not on the unit-energy level H_mu = 1/2."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"initial condition is off the energy level H=1/2 (residual {residual:.3e})")


class DomainError(PreconditionError):
    """Pose lies outside the domain of a (local) calibration function."""


class SignMismatchError(PreconditionError):
    """Sign of theta-dot along a geodesic disagrees with the calibration root."""


class NotHorizontalError(PreconditionError):
    """Tangent vector has a nonzero component along X_v."""


class IntegrationError(RuntimeError):
    """Numerical failure inside an integrator or quadrature (CLI exit code 1)."""

    def __init__(self, message: str, achieved_time: float | None = None):
        self.achieved_time = achieved_time
        if achieved_time is not None:
            message = f"{message} (reached t={achieved_time!r})"
        super().__init__(message)
