"""Exception hierarchy shared by every module."""


class KPolError(Exception):
    """Base class for all errors raised by this package."""


class ArityMismatch(KPolError, ValueError):
    pass


class ZeroPolynomial(KPolError, ValueError):
    """An operation needs a polynomial that is not identically zero."""


class BothZero(KPolError, ValueError):
    pass


class ParseError(KPolError, ValueError):
    pass


class InvalidRange(KPolError, ValueError):
    pass


class NotLinearInLastVar(KPolError, ValueError):
    pass


class LeadingCoeffVanishes(KPolError, ValueError):
    pass


class DimensionMismatch(KPolError, ValueError):
    pass


class NotPlainSum(KPolError, ValueError):
    pass


class SplitMismatch(KPolError, ValueError):
    pass


class EmptyAxis(KPolError, ValueError):
    pass


class IndexOutOfRange(KPolError, IndexError):
    pass


class DegenerateDimensions(KPolError, ValueError):
    pass


class KTooSmall(KPolError, ValueError):
    pass


class UnsupportedK(KPolError, ValueError):
    pass


class UnsupportedDegree(KPolError, ValueError):
    pass


class CoincidentCurves(KPolError, ValueError):
    pass


class InconsistentOrderType(KPolError, ValueError):
    pass


class UnknownSolver(KPolError, ValueError):
    pass


class InsufficientData(KPolError, ValueError):
    pass


class NonPositive(KPolError, ValueError):
    pass
