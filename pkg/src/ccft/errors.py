"""Exception types shared across the package."""


class CcftError(Exception):
    pass


class NonPrimitivePolynomial(CcftError):
    """The modulus polynomial does not make x a multiplicative generator."""


class DivisionByZero(CcftError):
    pass


class OrderUnavailable(CcftError):
    """No element of the requested multiplicative order exists in the field."""


class InvalidLength(CcftError):
    pass


class UnsupportedLength(CcftError):
    pass


class DimensionMismatch(CcftError):
    pass


class BadFactorization(CcftError):
    pass


class LengthMismatch(CcftError):
    pass


class PrecisionViolation(CcftError):
    """An input declared always-zero was nonzero at evaluation time."""


class InconsistentPair(CcftError):
    """Locator/evaluator pair is malformed (odd part vanishes at a root)."""
