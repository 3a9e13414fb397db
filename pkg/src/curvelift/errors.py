"""Exception types.  Names mirror the error vocabulary used across the CLI."""


class CurveLiftError(Exception):
    """Base class for all library errors."""


# field / polynomial layer
class NonPrimeCharacteristic(CurveLiftError, ValueError):
    pass


class TowerMismatch(CurveLiftError, ValueError):
    pass


class ContextMismatch(CurveLiftError, TypeError):
    pass


class DivisionByZero(CurveLiftError, ZeroDivisionError):
    pass


class DivisionByZeroPoly(CurveLiftError, ZeroDivisionError):
    pass


class NoTowerDeclared(CurveLiftError):
    pass


class ArgNotInSubfield(CurveLiftError, ValueError):
    pass


# geometry
class EnumerationBudgetExceeded(CurveLiftError):
    pass


class ClassReductionUnsound(CurveLiftError):
    pass


class PointNotOnCurve(CurveLiftError, ValueError):
    pass


class InvalidExtensionDegree(CurveLiftError, ValueError):
    pass


class BoundViolated(CurveLiftError):
    pass


class LineInCurve(CurveLiftError):
    """A line is a component of the curve, so its restriction vanishes."""


# codes / repair
class DegeneratePlan(CurveLiftError):
    pass


class LocalityUnsatisfiable(CurveLiftError):
    pass


class LengthMismatch(CurveLiftError, ValueError):
    pass


class NoViableLine(CurveLiftError):
    pass


class IndexOutOfRange(CurveLiftError, IndexError):
    pass
