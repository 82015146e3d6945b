"""Exception hierarchy shared by all eisq modules."""


class EisqError(Exception):
    """Base class; the CLI turns these into machine-readable error objects."""

    code = "error"


class InvalidDiscriminant(EisqError, ValueError):
    code = "invalid_discriminant"


class InvalidArgument(EisqError, ValueError):
    code = "invalid_argument"


class PrecisionError(EisqError, ArithmeticError):
    """Requested accuracy could not be reached within the iteration budget."""

    code = "precision"


class CertificateError(EisqError, ArithmeticError):
    """A local Euler factor of sigma failed to terminate as a polynomial."""

    code = "certificate"


class BudgetExceeded(EisqError, RuntimeError):
    code = "budget"
