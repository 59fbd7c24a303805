"""Exception hierarchy shared by every module."""


class LabError(Exception):
    """Base class for numeric failures surfaced by the lab (CLI exit code 3)."""

    code = "NUMERIC"


class DomainError(LabError, ValueError):
    code = "DOMAIN"


class PrecisionError(LabError, ArithmeticError):
    """Working precision cannot absorb the cancellation of a sum."""

    code = "PRECISION"

    def __init__(self, message, deficit_bits=0):
        super().__init__(message)
        self.deficit_bits = deficit_bits


class NonFiniteError(LabError, ArithmeticError):
    code = "NONFINITE"


class SingularTimeError(LabError):
    code = "SINGULAR_TIME"


class AmbiguousError(LabError):
    """Loop classification could not decide between the two lemniscate loops."""

    code = "AMBIGUOUS"


class GlueError(LabError, ValueError):
    code = "GLUE"


class DegenerateError(LabError, ValueError):
    code = "DEGENERATE"
