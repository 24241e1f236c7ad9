"""Exception hierarchy shared by all modules."""


class OSAlgebraError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(OSAlgebraError):
    """Input data does not describe a valid object."""


class CircuitAxiomViolation(ValidationError):
    pass


class NotSimple(ValidationError):
    pass


class ElementOutOfRange(ValidationError):
    pass


class EmptyMatrix(ValidationError):
    pass


class RankOutOfRange(ValidationError):
    pass


class RankTooLow(ValidationError):
    pass


class LevelOutOfRange(ValidationError):
    pass


class DegreeZero(ValidationError):
    pass


class DegreeOverflow(ValidationError):
    pass


class MixedAmbient(ValidationError):
    pass


class FieldMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class BudgetExceeded(OSAlgebraError):
    """An exponential enumeration would exceed its configured budget."""


class ParseError(ValidationError):
    """Malformed matroid description; message carries the offending field."""


class UnknownCommand(ValidationError):
    pass


class FlagConflict(ValidationError):
    """Command-line flags that contradict each other."""
