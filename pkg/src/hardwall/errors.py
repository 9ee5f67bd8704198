class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class RegimeError(ValueError):
    """Wall radius not strictly inside the free droplet (rho0 < rho_star < rho1)."""


class UnboundedDropletError(ValueError):
    """r q'(r) never reaches 2, so the droplet has no outer radius."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, achieved=None, degree=None):
        if degree is not None:
            message = f"{message} (degree j={degree})"
        if achieved is not None:
            message = f"{message}; achieved relative error {achieved:.3e}"
        super().__init__(message)
        self.achieved = achieved
        self.degree = degree
