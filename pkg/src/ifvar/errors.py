"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`IfvarError`
and belongs to one of three families, which the command line maps onto exit
codes (validation 2, data 3, numerical 4).
"""


class IfvarError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ValidationError(IfvarError, ValueError):
    """Invalid arguments, configuration or invariant violations on inputs."""

    exit_code = 2


class DataError(IfvarError):
    """Problems with input data: unreadable files, malformed rows, gaps."""

    exit_code = 3


class InsufficientDataError(DataError):
    """Too few observations for the requested computation."""


class NumericalError(IfvarError, ArithmeticError):
    """A computation is undefined or numerically unstable for the given inputs."""

    exit_code = 4


class SingularityError(NumericalError):
    """A denominator or design matrix is (numerically) singular."""


class NonStationaryError(NumericalError):
    """A stationary moment was requested for a non-stationary system."""


class FactorizationError(NumericalError):
    """Cholesky factorization failed (matrix not positive definite)."""


class LowDrawCountWarning(UserWarning):
    """Posterior summaries based on too few draws to be reliable."""
