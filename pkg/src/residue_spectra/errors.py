"""Exception types raised by the library."""


class ResidueSpectraError(ValueError):
    """Base class for invalid-input errors."""


class NotPrime(ResidueSpectraError):
    pass


class ZeroInverse(ResidueSpectraError, ZeroDivisionError):
    pass


class BadRational(ResidueSpectraError):
    """The denominator of a rational argument is divisible by p."""


class NotOneModThree(ResidueSpectraError):
    pass


class WrongResidueClass(ResidueSpectraError):
    pass


class ZeroPolynomial(ResidueSpectraError):
    pass


class ZeroParameter(ResidueSpectraError):
    pass


class OutOfRange(ResidueSpectraError):
    pass


class CutoffExceeded(ResidueSpectraError):
    pass


class CoefficientOverflow(OverflowError):
    """A checked integer accumulator would leave the signed 64-bit range."""
