"""Exception types shared across the library."""

from __future__ import annotations


class TimegraphError(Exception):
    """Base class for every error raised by this package."""


class EmptyDateError(TimegraphError):
    """A calendar date with no granule at all."""


class InvalidYearError(TimegraphError):
    """Year outside the supported proleptic-Gregorian range (>= 1)."""


class InvalidDateError(TimegraphError):
    """A date whose fields are out of range or mutually inconsistent."""


class UnderspecifiedError(TimegraphError):
    """A partial date lacks the fields an operation needs."""


class NotDeicticError(TimegraphError):
    """Deictic resolution applied to a non-deictic date."""


class MalformedTripleError(TimegraphError):
    """A triple with an illegal term kind in some position."""


class ParseError(TimegraphError):
    """Syntax error in the text format, with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnknownPrefixError(ParseError):
    """A prefixed name whose prefix was never declared."""


class RuleDivergenceError(TimegraphError):
    """The rule engine exceeded its round limit without reaching a fixed point."""


class NotConvexlyDatedError(TimegraphError):
    """A resource without any convex (single-span) temporality."""


class RangeTooLargeError(TimegraphError):
    """A day-range query wider than the configured horizon."""
