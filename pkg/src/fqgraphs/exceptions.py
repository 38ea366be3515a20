"""Exception hierarchy shared by every module of the package."""


class FqGraphError(Exception):
    """Base class for all errors raised by fqgraphs."""


class NotPrime(FqGraphError, ValueError):
    pass


class EvenCharacteristic(FqGraphError, ValueError):
    pass


class ReducibleModulus(FqGraphError, ValueError):
    pass


class FieldMismatch(FqGraphError, TypeError):
    pass


class DivisionByZero(FqGraphError, ZeroDivisionError):
    pass


class DimensionMismatch(FqGraphError, ValueError):
    pass


class DegenerateForm(FqGraphError, ValueError):
    pass


class IndexOutOfRange(FqGraphError, IndexError):
    pass


class NonRealEigenvalue(FqGraphError, ArithmeticError):
    """A character sum that should be real carried an imaginary residual."""


class TooLarge(FqGraphError, ValueError):
    """An oracle was asked to run beyond its configured size cap."""


class PatternTooLarge(FqGraphError, ValueError):
    pass


class ColorZero(FqGraphError, ValueError):
    pass


class SubsetOutOfRange(FqGraphError, IndexError):
    pass


class ConfigError(FqGraphError, ValueError):
    pass


class FileFormatError(FqGraphError, ValueError):
    pass


class VerificationFailure(FqGraphError, AssertionError):
    """A theorem-level invariant was violated (should never happen)."""
