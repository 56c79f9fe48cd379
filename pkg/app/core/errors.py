"""Exceptions with the CLI exit code: 1 for bad input, 2 for invariant violations."""
from typing import Optional


class SheafHomologyError(Exception):
    exit_code = 1


class InputError(SheafHomologyError):
    exit_code = 1


class InvariantViolation(SheafHomologyError):
    exit_code = 2


class ParseError(InputError):
    """Raised by the tropical polynomial parser"""

    def __init__(self, position: int, expected: str, found: Optional[str] = None):
        self.position = position
        self.expected = expected
        self.found = found
        where = "end of input" if found is None else f"{found!r}"
        super().__init__(f"at position {position}: expected {expected}, found {where}")


class NotAComplex(InputError):
    pass


class NotInSpan(InputError):
    pass


class FarFace(InputError):
    pass


class InvalidRank(InputError):
    pass


class InvalidMatroid(InputError):
    pass


class DisconnectedMatroid(InputError):
    pass


class DegenerateInput(InputError):
    pass


class WrongDirection(InputError):
    pass


class PipelineError(InputError):
    pass


class DegeneratePair(InvariantViolation):
    pass
