"""Exception types shared across the package."""

from __future__ import annotations


class PrefDomainsError(Exception):
    """Base class for every error raised by this package."""


class OrderError(PrefDomainsError, ValueError):
    """Invalid linear order, rank, or alternative reference."""


class DomainError(PrefDomainsError, ValueError):
    """Invalid domain construction or a decider called outside its scope."""


class ConstructionError(PrefDomainsError, ValueError):
    """A social choice function construction's precondition does not hold."""


class ParseError(PrefDomainsError, ValueError):
    """Malformed domain or SCF file."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
