"""Exception types shared across the toolkit.

Every failure mode surfaced by the public API maps to one class here; the
command line translates them into exit codes and stderr messages via the
``code`` attribute.
"""

__all__ = [
    "ToolkitError",
    "IllConditionedError",
    "NotPDError",
    "SingularMatrixError",
    "NotCommutingError",
    "NotIdempotentError",
    "NotInCommutantError",
    "NotBlockDiagonalizableError",
    "TooLargeError",
    "UnknownExampleError",
    "BadParamsError",
    "MalformedCertificateError",
    "ConsistencyError",
]


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""

    code = "ERROR"


class IllConditionedError(ToolkitError):
    """A clustering or rank decision is too close to call at the current
    tolerances; the caller must adjust tol_cluster (or accept an
    inconclusive verdict)."""

    code = "ILL_CONDITIONED"


class NotPDError(ToolkitError):
    """Input is not Hermitian positive definite within tolerance."""

    code = "NOT_PD"


class SingularMatrixError(ToolkitError):
    """Condition number exceeds the configured cap; inversion refused."""

    code = "SINGULAR"


class NotCommutingError(ToolkitError):
    """Two operators that must commute do not, within tolerance."""

    code = "NOT_COMMUTING"


class NotIdempotentError(ToolkitError):
    """An operator required to satisfy P^2 = P does not, within tolerance."""

    code = "NOT_IDEMPOTENT"


class NotInCommutantError(ToolkitError):
    """An operator required to commute with the base matrix does not."""

    code = "NOT_IN_COMMUTANT"


class NotBlockDiagonalizableError(ToolkitError):
    """A supplied similarity fails to block-diagonalize a fiber with the
    requested block dimensions."""

    code = "NOT_BLOCK_DIAGONALIZABLE"


class TooLargeError(ToolkitError):
    """Assembled dimension exceeds the desk-scale cap."""

    code = "TOO_LARGE"


class UnknownExampleError(ToolkitError):
    """Requested builder name is not one of the bundled examples."""

    code = "UNKNOWN_EXAMPLE"


class BadParamsError(ToolkitError):
    """Builder parameters are invalid for the named example."""

    code = "BAD_PARAMS"


class MalformedCertificateError(ToolkitError):
    """A certificate document is structurally invalid or references points
    absent from the field it is checked against."""

    code = "MALFORMED_CERTIFICATE"


class ConsistencyError(ToolkitError):
    """An internal cross-check failed (for example, a computed commutant
    basis is not closed under products). Indicates the result cannot be
    trusted rather than bad user input."""

    code = "CONSISTENCY"
