"""Independent brute-force oracles the tests check the library against.

Everything here is deliberately written against the standard library
(datetime) or as naive enumeration, not against the code under test.
"""

from __future__ import annotations

import datetime as dt


def leap_by_day_stepping(year: int) -> bool:
    """Count the days of a year by stepping one day at a time."""
    day = dt.date(year, 1, 1)
    count = 0
    while day.year == year:
        count += 1
        day += dt.timedelta(days=1)
        if day.year != year:
            break
    return count == 366


def weekday_index(year: int, month: int, day: int) -> int:
    """Monday = 0, via the standard library."""
    return dt.date(year, month, day).weekday()


def floyd_warshall_closure(n: int, edges: set[tuple[int, int]]) -> set[tuple[int, int]]:
    reach = [[False] * n for _ in range(n)]
    for a, b in edges:
        reach[a][b] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return {(i, j) for i in range(n) for j in range(n) if reach[i][j]}


def nth_weekday_of_month(year: int, month: int, weekday: int, nth: int) -> dt.date | None:
    """nth occurrence (1-based) of a weekday inside a month, or None."""
    day = dt.date(year, month, 1)
    count = 0
    while day.month == month:
        if day.weekday() == weekday:
            count += 1
            if count == nth:
                return day
        day += dt.timedelta(days=1)
    return None


# -- day-expansion oracle for occurrence queries ------------------------------

def expand_interval_days(begin: dt.date | None, end: dt.date | None,
                         window: tuple[dt.date, dt.date]) -> set[dt.date]:
    """Days of the window covered by a (possibly open-ended) interval."""
    lo, hi = window
    if begin is not None and begin > lo:
        lo = begin
    if end is not None and end < hi:
        hi = end
    out = set()
    day = lo
    while day <= hi:
        out.add(day)
        day += dt.timedelta(days=1)
    return out


def expand_year_days(year: int, window: tuple[dt.date, dt.date]) -> set[dt.date]:
    return expand_interval_days(dt.date(year, 1, 1), dt.date(year, 12, 31), window)


def expand_pattern_days(window: tuple[dt.date, dt.date], *, month=None, day=None,
                        weekday=None, week=None) -> set[dt.date]:
    """Days of the window matching a recurring day pattern."""
    out = set()
    cursor, hi = window
    while cursor <= hi:
        ok = True
        if month is not None and cursor.month != month:
            ok = False
        if day is not None and cursor.day != day:
            ok = False
        if weekday is not None and cursor.weekday() != weekday:
            ok = False
        if week is not None and (cursor.day - 1) // 7 + 1 != week:
            ok = False
        if ok:
            out.add(cursor)
        cursor += dt.timedelta(days=1)
    return out


def expand_sampled_hours_days(anchor: dt.date, step_hours: int, span_days: int,
                              window: tuple[dt.date, dt.date]) -> set[dt.date]:
    """Days with at least one occurrence of 'every N hours' from the
    anchor midnight, over an inclusive span of days."""
    out = set()
    moment = dt.datetime(anchor.year, anchor.month, anchor.day)
    last = moment + dt.timedelta(days=span_days - 1, hours=23, minutes=59, seconds=59)
    while moment <= last:
        day = moment.date()
        if window[0] <= day <= window[1]:
            out.add(day)
        moment += dt.timedelta(hours=step_hours)
    return out
