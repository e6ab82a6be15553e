"""Exception hierarchy. Every error carries a stable string ``code``."""


class MoufangError(Exception):
    code = "ERROR"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class UnknownGenerator(MoufangError, KeyError):
    code = "UNKNOWN_GENERATOR"


class UnsupportedOrder(MoufangError, ValueError):
    code = "UNSUPPORTED_ORDER"


class NotSpherical(MoufangError, ValueError):
    code = "NOT_SPHERICAL"


class NotReduced(MoufangError, ValueError):
    code = "NOT_REDUCED"


class NotPrenilpotent(MoufangError, ValueError):
    code = "NOT_PRENILPOTENT"


class NestedPair(MoufangError, ValueError):
    code = "NESTED_PAIR"


class DivisionByZero(MoufangError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class FieldMismatch(MoufangError, ValueError):
    code = "FIELD_MISMATCH"


class UnsupportedField(MoufangError, ValueError):
    code = "UNSUPPORTED_FIELD"


class WrongEdge(MoufangError, ValueError):
    code = "WRONG_EDGE"


class IdentityInput(MoufangError, ValueError):
    code = "IDENTITY_INPUT"


class CocycleViolation(MoufangError, ValueError):
    code = "COCYCLE_VIOLATION"


class PanelMismatch(MoufangError, ValueError):
    code = "PANEL_MISMATCH"


class NotRealisable(MoufangError, ValueError):
    code = "NOT_REALISABLE"


class Not3Spherical(MoufangError, ValueError):
    code = "NOT_3_SPHERICAL"


class OutOfRange(MoufangError, ValueError):
    code = "OUT_OF_RANGE"


class UnsupportedLetter(MoufangError, ValueError):
    code = "UNSUPPORTED_LETTER"


class UnsupportedSmallField(MoufangError, ValueError):
    """A non-simple root element is not generated by the simple root groups."""

    code = "UNSUPPORTED_SMALL_FIELD"


class SchemaError(MoufangError, ValueError):
    code = "SCHEMA_ERROR"


class IOFailure(MoufangError, OSError):
    code = "IO_ERROR"
