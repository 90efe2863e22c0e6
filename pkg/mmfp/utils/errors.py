"""
Error types for mmfp
Every failure the library raises derives from MMFPError.
"""


class MMFPError(Exception):
    """Base class for all mmfp errors."""


class InvalidInput(MMFPError, ValueError):
    """Malformed user input (source descriptors, q-series files, flags)."""


class NotPrime(MMFPError, ValueError):
    """An integer passed as a prime is not prime."""


class Unsupported(MMFPError, ValueError):
    """The request lies outside what is implemented (p < 5, level > 1)."""


class FieldMismatch(MMFPError, ValueError):
    """Operands live in different fields."""


class WeightMismatch(MMFPError, ValueError):
    """Series of different weights were added."""


class DenominatorDivisibleByP(MMFPError, ArithmeticError):
    """A rational number is not p-integral, so it has no reduction mod p."""


class ZeroPolynomial(MMFPError, ArithmeticError):
    """Root finding was asked for the zero polynomial."""


class DegreeBoundExceeded(MMFPError, ArithmeticError):
    """A polynomial or field degree is above the configured cap."""


class InsufficientPrecision(MMFPError, ArithmeticError):
    """A q-expansion is too short for the requested operation."""


class HasseNotConstant(MMFPError, ArithmeticError):
    """E_{p-1} mod p did not reduce to 1 (internal consistency failure)."""


class ZeroForm(MMFPError, ArithmeticError):
    """The zero form has no filtration or eigensystem."""


class NotAModularForm(MMFPError, ArithmeticError):
    """A q-series does not lie in M_k mod p for its weight tag."""


class EllEqualsP(MMFPError, ValueError):
    """T_p was requested; only T_l with l != p is supported."""


class NotAnEigenform(MMFPError, ArithmeticError):
    """A form is not an eigenvector of every requested T_l."""


class TheoremViolation(MMFPError, ArithmeticError):
    """No cuspidal eigensystem matched at weight w or w + p^2 - 1."""


class UnresolvedEigensystem(MMFPError, ArithmeticError):
    """A matching eigensystem could not be isolated in a one-dimensional eigenspace."""
