"""Exception hierarchy shared by every layer of the checker.

Each class carries the CLI exit status it maps to, so the session driver
can translate any failure without a lookup table.
"""

from __future__ import annotations


class ImgqlError(Exception):
    exit_code = 3


class UsageError(ImgqlError):
    exit_code = 1


class ParseError(ImgqlError):
    exit_code = 2

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


class StaticError(ImgqlError):
    """Name resolution, arity and macro-cycle errors found before evaluation."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class NameResolutionError(StaticError):
    pass


class ArityError(StaticError):
    pass


class CycleError(StaticError):
    def __init__(self, cycle: list[str], line: int | None = None, column: int | None = None):
        self.cycle = list(cycle)
        super().__init__("recursive definition: " + " -> ".join(cycle), line, column)


class DimensionError(ImgqlError):
    pass


class ConflictError(ImgqlError):
    pass


class ParameterError(ImgqlError):
    pass


class EvaluationError(ImgqlError):
    pass


class LoadError(ImgqlError):
    exit_code = 4
