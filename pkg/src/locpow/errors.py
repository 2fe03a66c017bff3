"""Exception hierarchy shared by every module."""


class LocpowError(Exception):
    """Base class for all library errors."""


class PrecisionMismatch(LocpowError, ValueError):
    pass


class NotAUnit(LocpowError, ValueError):
    pass


class DomainViolation(LocpowError, ValueError):
    """Input lies outside p.Z_p / 1+p.Z_p (4.Z_2 / 1+4.Z_2 when p = 2)."""


class RankMismatch(LocpowError, ValueError):
    pass


class NotPowerful(LocpowError, ValueError):
    pass


class InvalidLie(LocpowError, ValueError):
    """The bracket table violates the Jacobi identity mod p^k."""


class NonConvergence(LocpowError, ArithmeticError):
    pass


class PrecisionExhausted(LocpowError, ValueError):
    pass


class Inconsistent(LocpowError):
    pass


class CutoffExceeded(LocpowError, ValueError):
    pass


class PrimeMismatch(LocpowError, ValueError):
    pass


class WrongPrime(LocpowError, ValueError):
    pass


class SizeGuard(LocpowError, ValueError):
    pass


class ParseError(LocpowError, ValueError):
    """Malformed input document or expression; carries a location string."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
