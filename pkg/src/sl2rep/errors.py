"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of the operation."""


class NotRegularSemisimpleError(ValueError):
    """Matrix is parabolic (trace +-2 but not central): no centralizer class."""


class SingularPointError(ValueError):
    """Evaluation requested at a singular parameter (e.g. theta in pi*Z)."""


class ConfigurationError(ValueError):
    """Invalid truncation order, tolerance, grid or config file."""


class TruncationError(RuntimeError):
    """Series truncation too short to certify the requested tolerance."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not certify the requested tolerance."""


class IllConditionedError(RuntimeError):
    """Numerical check cannot be carried out reliably at this point."""
