"""Exception hierarchy shared by all sheafflow modules."""


class SheafflowError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SheafflowError):
    """Malformed user input (graph spec, coding matrices, CLI config)."""


class ShapeError(SheafflowError):
    """Matrix dimensions incompatible with the requested operation."""


class FieldMismatchError(SheafflowError):
    """Operands live over different prime fields."""


class SheafIncompleteError(SheafflowError):
    """A restriction matrix is missing for some (vertex, edge) incidence."""


class CodingIncompleteError(SheafflowError):
    """A required local coding matrix was not supplied."""


class FiltrationOrderError(SheafflowError):
    """Levels passed in the wrong nesting order."""


class DegreeError(SheafflowError):
    """Cohomological degree outside {0, 1}."""


class InvariantViolation(SheafflowError):
    """An internal consistency check failed; indicates a bug, not bad input."""
