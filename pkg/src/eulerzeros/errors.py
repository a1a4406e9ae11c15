"""Exception types shared across the package."""


class EulerZerosError(Exception):
    """Base class for all package-specific errors."""


class PrecisionInsufficient(EulerZerosError):
    """Rounding error bound swamped the requested evaluation accuracy."""


class InvalidDegree(EulerZerosError, ValueError):
    """Degree outside the operation's admissible range."""


class NoConvergence(EulerZerosError):
    """Root iteration failed after all precision escalations.

    Carries partial diagnostics in ``diagnostics`` (dict).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CertificationFailed(EulerZerosError):
    """A recomputed residual exceeded the certification threshold."""


class DomainViolation(EulerZerosError, ValueError):
    """Argument outside the mathematical domain of the formula."""


class QuadratureNotConverged(EulerZerosError):
    """Doubling the node count moved the contour integral too much."""


class DegenerateFit(EulerZerosError):
    """Log-log slope fit impossible (an error underflowed to zero)."""


class EmptyInput(EulerZerosError, ValueError):
    """A statistic was requested on an empty sample."""


class SchemaError(EulerZerosError, ValueError):
    """A JSON document failed schema validation."""
