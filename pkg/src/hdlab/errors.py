"""Exception types shared across the package.

Everything that signals bad input derives from ValidationError (a ValueError),
so callers that only care about "my input was rejected" can catch one type.
Solver-side failures derive from SolverError (a RuntimeError).
"""


class ValidationError(ValueError):
    """Invalid input data or configuration."""


class DegenerateColumnError(ValidationError):
    """A column is constant where variation is required."""


class UndefinedCorrelationError(ValidationError):
    """Correlation requested against a zero-variance vector."""


class UndefinedMetricError(ValidationError):
    """Metric undefined for this input (e.g. all pairwise distances zero)."""


class NotStandardizedError(ValidationError):
    """Solver requires columns with mean 0 and unit standard deviation."""


class SizeLimitError(ValidationError):
    """Problem size exceeds the cap for an exhaustive method."""


class ConfigurationError(ValidationError):
    """Inconsistent or out-of-range configuration values."""


class SingularityError(ValidationError):
    """Design submatrix is rank deficient where a unique fit is required."""


class SelectionTooLargeError(ValidationError):
    """Selected support too large for the refit sample."""


class StepSizeError(RuntimeError):
    """Gradient step produced a diverging iteration."""


class SolverError(RuntimeError):
    """Optimizer failed; the message carries the certificate."""


class InfeasibleError(SolverError):
    """Linear program infeasible (phase-1 objective in the message)."""


class UnboundedError(SolverError):
    """Linear program unbounded below."""
