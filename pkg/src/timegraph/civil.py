"""Calendar units and civil (proleptic Gregorian) arithmetic.

Everything here is pure integer math over years >= 1, with no timezone
handling and no fractional seconds.
"""

from __future__ import annotations

from enum import Enum

from .errors import InvalidDateError, InvalidYearError


class Granularity(Enum):
    """Calendar unit scale, totally ordered coarse to fine."""

    CENTURY = 0
    YEAR = 1
    MONTH = 2
    WEEK = 3
    DAY = 4
    HOUR = 5
    MINUTE = 6
    SECOND = 7

    @property
    def rank(self) -> int:
        return self.value

    def is_coarser_than(self, other: "Granularity") -> bool:
        return self.value < other.value

    def is_finer_than(self, other: "Granularity") -> bool:
        return self.value > other.value


GRANULARITIES = tuple(Granularity)

COARSER = "coarser"
EQUAL = "equal"
FINER = "finer"


def granularity_compare(a: Granularity, b: Granularity) -> str:
    """How `a` relates to `b` on the Century..Second chain."""
    if a.value < b.value:
        return COARSER
    if a.value > b.value:
        return FINER
    return EQUAL


class Weekday(Enum):
    MONDAY = 0
    TUESDAY = 1
    WEDNESDAY = 2
    THURSDAY = 3
    FRIDAY = 4
    SATURDAY = 5
    SUNDAY = 6


class PlainDay(Enum):
    """Day-of-month with no weekday or deictic flavor."""

    PLAIN = "plain"


PLAIN_DAY = PlainDay.PLAIN


class GenericDay(Enum):
    """Deictic day names, resolved against a context date."""

    TODAY = "Today"
    YESTERDAY = "Yesterday"
    TOMORROW = "Tomorrow"


# Day offset applied when a generic day is resolved against its context.
# New deictic names can be registered here together with a vocabulary class.
GENERIC_DAY_OFFSETS: dict[GenericDay, int] = {
    GenericDay.TODAY: 0,
    GenericDay.YESTERDAY: -1,
    GenericDay.TOMORROW: 1,
}

DayKind = Weekday | GenericDay | PlainDay

MONTH_NAMES = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)

_DAYS_PER_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)

# Cumulative days before month m in a common year.
_CUM_DAYS = (0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334)


def is_leap_year(year: int) -> bool:
    if year < 1:
        raise InvalidYearError(f"year must be >= 1, got {year}")
    return year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)


def days_in_year(year: int) -> int:
    return 366 if is_leap_year(year) else 365


def days_in_month(month: int, year: int | None = None) -> int:
    """Length of a month; February needs a year to decide 28 vs 29."""
    if not 1 <= month <= 12:
        raise InvalidDateError(f"month must be 1..12, got {month}")
    if month == 2 and year is not None and is_leap_year(year):
        return 29
    return _DAYS_PER_MONTH[month - 1]


def min_days_in_month(month: int) -> int:
    """Shortest possible length of the month, year unknown."""
    if not 1 <= month <= 12:
        raise InvalidDateError(f"month must be 1..12, got {month}")
    return _DAYS_PER_MONTH[month - 1]


def century_of_year(year: int) -> int:
    """Civil convention: the 20th century is 1901..2000."""
    return (year - 1) // 100 + 1


def century_year_span(century: int) -> tuple[int, int]:
    return (century - 1) * 100 + 1, century * 100


def check_civil_date(year: int, month: int, day: int) -> None:
    if year < 1:
        raise InvalidDateError(f"year must be >= 1, got {year}")
    if not 1 <= month <= 12:
        raise InvalidDateError(f"month must be 1..12, got {month}")
    if not 1 <= day <= days_in_month(month, year):
        raise InvalidDateError(f"no day {day} in {year}-{month:02d}")


def to_ordinal(year: int, month: int, day: int) -> int:
    """Day number with 0001-01-01 = 1 (same convention as datetime)."""
    check_civil_date(year, month, day)
    y = year - 1
    leap_shift = 1 if (month > 2 and is_leap_year(year)) else 0
    return 365 * y + y // 4 - y // 100 + y // 400 + _CUM_DAYS[month - 1] + leap_shift + day


def from_ordinal(ordinal: int) -> tuple[int, int, int]:
    """Inverse of to_ordinal."""
    if ordinal < 1:
        raise InvalidDateError(f"ordinal must be >= 1, got {ordinal}")
    # Estimate the year, then correct; the estimate is off by at most one.
    year = max(1, (ordinal * 400) // 146097 + 1)
    while to_ordinal(year, 1, 1) > ordinal:
        year -= 1
    while to_ordinal(year, 12, 31) < ordinal:
        year += 1
    rest = ordinal - to_ordinal(year, 1, 1)
    month = 1
    while rest >= days_in_month(month, year):
        rest -= days_in_month(month, year)
        month += 1
    return year, month, rest + 1


def weekday_of(year: int, month: int, day: int) -> Weekday:
    """Proleptic-Gregorian weekday; 0001-01-01 is a Monday."""
    return Weekday((to_ordinal(year, month, day) - 1) % 7)


def week_of_month(day: int) -> int:
    """Occurrence index of a weekday within its month (day 1..7 -> 1)."""
    return (day - 1) // 7 + 1
