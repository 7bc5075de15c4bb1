#!/usr/bin/env python3

from typing import Any, Optional


class NumericsError(Exception):
    """Base class for failures raised by the numerical engines."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message
        self.path: list[str] = []

    @property
    def breadcrumb(self) -> str:
        """AST path from the root to the node that failed, outermost first."""
        return " > ".join(self.path)

    def __str__(self) -> str:
        if self.path:
            return f"{self.message} [at {self.breadcrumb}]"
        return self.message


class DomainError(NumericsError):
    """Argument lies outside the region the implementation supports."""


class PoleError(NumericsError):
    """Evaluation hit a pole; `location` is the offending argument."""

    def __init__(self, message: str, location: Any = None, index: Optional[Any] = None):
        super().__init__(message)
        self.location = location
        self.index = index


class DivergenceError(NumericsError):
    """A series, product or integral was detected to diverge."""

    def __init__(self, message: str, direction: Optional[str] = None):
        super().__init__(message)
        self.direction = direction


class UnsupportedDegreeError(NumericsError):
    """Polynomial degree beyond the precomputed tables."""


class EvaluationError(NumericsError):
    """Non-finite or ill-typed intermediate value during evaluation."""


class DSLError(Exception):
    """Base class for identity-language errors carrying a source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0, filename: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.filename = filename

    def __str__(self) -> str:
        where = f"{self.filename or '<input>'}:{self.line}:{self.column}"
        return f"{where}: {self.message}"


class LexError(DSLError):
    """Illegal character or malformed literal."""


class ParseError(DSLError):
    """Syntax error; `expected` lists what would have been accepted."""

    def __init__(
        self,
        message: str,
        line: int = 0,
        column: int = 0,
        filename: Optional[str] = None,
        expected: Optional[set[str]] = None,
    ):
        super().__init__(message, line, column, filename)
        self.expected = expected or set()


class ValidationError(DSLError):
    """Scope, domain or constraint problems found after parsing."""

    def __init__(
        self,
        message: str,
        problems: Optional[list[str]] = None,
        line: int = 0,
        column: int = 0,
        filename: Optional[str] = None,
    ):
        super().__init__(message, line, column, filename)
        self.problems = problems or []


class RegistryError(Exception):
    """Problems with the identity registry as a whole."""
