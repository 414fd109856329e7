import itertools

import pytest

from timegraph.civil import (
    COARSER, EQUAL, FINER, GRANULARITIES, GenericDay, Granularity, Weekday,
    days_in_month, days_in_year, from_ordinal, granularity_compare,
    is_leap_year, to_ordinal, weekday_of, week_of_month,
)
from timegraph.errors import InvalidDateError, InvalidYearError

import oracles


def test_granularity_compare_examples():
    assert granularity_compare(Granularity.YEAR, Granularity.CENTURY) == FINER
    assert granularity_compare(Granularity.DAY, Granularity.DAY) == EQUAL
    assert granularity_compare(Granularity.SECOND, Granularity.CENTURY) == FINER
    assert granularity_compare(Granularity.CENTURY, Granularity.SECOND) == COARSER


def test_granularity_strict_total_order():
    for a, b in itertools.product(GRANULARITIES, repeat=2):
        result = granularity_compare(a, b)
        if a is b:
            assert result == EQUAL
        else:
            assert result in (COARSER, FINER)
            flipped = granularity_compare(b, a)
            assert {result, flipped} == {COARSER, FINER}


def test_granularity_transitivity_exhaustive():
    for a, b, c in itertools.product(GRANULARITIES, repeat=3):
        if granularity_compare(a, b) == FINER and granularity_compare(b, c) == FINER:
            assert granularity_compare(a, c) == FINER


def test_granularity_chain_has_seven_edges():
    edges = [(GRANULARITIES[i + 1], GRANULARITIES[i]) for i in range(7)]
    assert len(edges) == 7
    for fine, coarse in edges:
        assert granularity_compare(fine, coarse) == FINER


def test_is_leap_year_examples():
    assert is_leap_year(2000) is True
    assert is_leap_year(1900) is False
    assert is_leap_year(2012) is True
    assert is_leap_year(2011) is False


def test_is_leap_year_rejects_year_zero():
    with pytest.raises(InvalidYearError):
        is_leap_year(0)


def test_leap_year_against_day_stepping_sample():
    # The full 1..3000 sweep lives in the acceptance suite.
    for year in (1, 4, 100, 400, 1900, 2000, 2011, 2012, 2100, 2400):
        assert is_leap_year(year) == oracles.leap_by_day_stepping(year)


def test_weekday_named_dates():
    assert weekday_of(2015, 1, 1) == Weekday.THURSDAY
    assert weekday_of(2014, 8, 29) == Weekday.FRIDAY
    assert weekday_of(2015, 2, 17) == Weekday.TUESDAY


def test_weekday_successor_property():
    previous = weekday_of(1999, 12, 31)
    ordinal = to_ordinal(1999, 12, 31)
    for step in range(1, 1000):
        y, m, d = from_ordinal(ordinal + step)
        current = weekday_of(y, m, d)
        assert current.value == (previous.value + 1) % 7
        previous = current


def test_weekday_matches_stdlib():
    for ordinal in range(1, 800000, 7919):
        y, m, d = from_ordinal(ordinal)
        assert weekday_of(y, m, d).value == oracles.weekday_index(y, m, d)


def test_weekday_invalid_date():
    with pytest.raises(InvalidDateError):
        weekday_of(2015, 2, 29)
    with pytest.raises(InvalidDateError):
        weekday_of(2015, 13, 1)


def test_ordinal_round_trip():
    for ordinal in (1, 59, 60, 365, 366, 730, 100000, 735473):
        y, m, d = from_ordinal(ordinal)
        assert to_ordinal(y, m, d) == ordinal


def test_days_in_month():
    assert days_in_month(2, 2015) == 28
    assert days_in_month(2, 2012) == 29
    assert days_in_month(4, 2012) == 30
    assert days_in_month(2) == 28


def test_days_in_year():
    assert days_in_year(2012) == 366
    assert days_in_year(2011) == 365


def test_week_of_month():
    assert week_of_month(1) == 1
    assert week_of_month(7) == 1
    assert week_of_month(8) == 2
    assert week_of_month(31) == 5


def test_generic_day_names():
    assert {g.value for g in GenericDay} == {"Today", "Yesterday", "Tomorrow"}
