import itertools
import random

import pytest

from timegraph.civil import Granularity, Weekday
from timegraph.errors import RuleDivergenceError, TimegraphError
from timegraph.model import date_from_node
from timegraph.rules import (
    ViolationKind, build_rule_groups, check_allen_cycles,
    check_cycle_consistency, check_month_ranges, run_all, run_checks,
)
from timegraph.store import Blank, Iri, Literal, Pattern, TripleStore, Var
from timegraph.vocab import (
    A, DT, GRAN_CLASS, GENERIC_CLASS, MONTH_CLASS, RDF, WEEKDAY_CLASS,
    load_schema,
)

from conftest import REFERENCE_TODAY, build_store
import oracles

EX = "http://example.org/"


def fresh_store() -> TripleStore:
    store = TripleStore()
    load_schema(store)
    return store


# ---------------------------------------------------------------------------
# Month name normalization
# ---------------------------------------------------------------------------

def test_month_name_gains_number():
    store = fresh_store()
    node = Blank("m")
    store.add(node, A, MONTH_CLASS[2])
    run_all(store)
    assert store.contains(node, DT.month, Literal(2))


def test_month_number_gains_name():
    store = fresh_store()
    node = Blank("m")
    store.add(node, DT.month, Literal(4))
    run_all(store)
    assert store.contains(node, A, MONTH_CLASS[4])


def test_month_rule_fixed_point():
    store = fresh_store()
    node = Blank("m")
    store.add(node, A, MONTH_CLASS[2])
    store.add(node, DT.month, Literal(2))
    run_all(store)
    report = run_all(store)
    assert report.per_rule_firings["month_names"] == 0


# ---------------------------------------------------------------------------
# Leap year marking
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("year,leap,days", [
    (2012, True, 366), (2011, False, 365), (2000, True, 366), (1900, False, 365),
])
def test_leap_year_marks(year, leap, days):
    store = fresh_store()
    node = Blank("y")
    store.add(node, A, DT.Year)
    store.add(node, DT.year, Literal(year))
    run_all(store)
    assert store.contains(node, A, DT.LeapYear if leap else DT.CommonYear)
    assert store.contains(node, DT.days, Literal(days))
    assert run_all(store).per_rule_firings["leap_years"] == 0


# ---------------------------------------------------------------------------
# Period marker resolution
# ---------------------------------------------------------------------------

def test_period_gains_referent_date():
    store, _ = build_store(["battles_relative_dating.ttl", "battle_reference_dated.ttl"])
    period = store.subjects(RDF.value, Iri(EX + "data/BattleOfMekhe"))
    period = [p for p in period if store.contains(p, A, DT.Period)]
    assert len(period) == 1
    date_node = store.object(period[0], DT.hasDate)
    assert date_node is not None
    lifted = date_from_node(store, date_node)
    assert lifted is not None and lifted.year == 1859


def test_period_with_undated_referent_fires_nothing():
    store, report = build_store(["battles_relative_dating.ttl"])
    assert report.per_rule_firings["period_dates"] == 0


def test_period_date_reaches_all_users():
    store = fresh_store()
    mekhe = Iri(EX + "data/BattleOfMekhe")
    period = Blank("period")
    store.add(period, A, DT.Period)
    store.add(period, RDF.value, mekhe)
    users = [Blank("u1"), Blank("u2")]
    for user in users:
        store.add(user, A, DT.During)
        store.add(user, DT.hasDate, period)
    # The referent's own temporality.
    ref_interval, ref_date = Blank("ri"), Blank("rd")
    ref_year = Blank("ry")
    thing = Blank("th")
    store.add(ref_interval, A, DT.During)
    store.add(ref_interval, DT.hasDate, ref_date)
    store.add(ref_date, A, DT.Date)
    store.add(ref_date, DT.hasYear, ref_year)
    store.add(ref_year, A, DT.Year)
    store.add(ref_year, DT.year, Literal(1859))
    store.add(ref_interval, DT.exp, thing)
    store.add(thing, A, DT.TemporalThing)
    store.add(thing, RDF.value, mekhe)
    run_all(store)
    for user in users:
        assert store.contains(user, DT.hasDate, ref_date)


# ---------------------------------------------------------------------------
# Duration -> end normalization
# ---------------------------------------------------------------------------

def test_duration_end_year_arithmetic():
    store, _ = build_store(["presidency_duration_span.ttl"])
    intervals = [b["x"] for b in store.match(
        [Pattern(Var("x"), DT.hasDuration, Var("d"))])]
    assert len(intervals) == 1
    end_node = store.object(intervals[0], DT.hasEnd)
    assert end_node is not None
    end = date_from_node(store, end_node)
    assert end.year == 1980
    assert end.month == 9  # copied from the begin date, year adjusted


def test_duration_end_deictic_days():
    store, _ = build_store(["interval_sampled_hours.ttl"])
    intervals = [b["x"] for b in store.match(
        [Pattern(Var("x"), DT.hasDuration, Var("d"))])]
    end = date_from_node(store, store.object(intervals[0], DT.hasEnd))
    assert (end.year, end.month, end.day_of_month) == (2014, 9, 7)
    assert end.day_kind == Weekday.SUNDAY


def test_duration_end_respects_existing_end():
    store, report = build_store(["presidency_reified_interval.ttl"])
    assert report.per_rule_firings["duration_end"] == 0


def test_duration_end_skippable():
    store, report = build_store(["presidency_duration_span.ttl"],
                                skip=("duration_end",))
    assert "duration_end" not in report.per_rule_firings
    assert not store.match([Pattern(Var("x"), DT.hasEnd, Var("e"))])


def test_unknown_skip_name_rejected():
    store = fresh_store()
    with pytest.raises(TimegraphError):
        run_all(store, skip=("no_such_rule",))


def test_duration_end_without_today_leaves_deictic_alone():
    store = fresh_store()
    from timegraph import textio, fixtures
    textio.insert_document(
        store, textio.parse_file(fixtures.fixture_path("interval_sampled_hours.ttl")))
    report = run_all(store, today=None)
    assert report.per_rule_firings["duration_end"] == 0
    leftovers = run_checks(store)
    assert [v.kind for v in leftovers] == [ViolationKind.DURATION_UNDERSPECIFIED]


# ---------------------------------------------------------------------------
# Allen closure
# ---------------------------------------------------------------------------

def test_before_transitivity_and_inverse():
    store = fresh_store()
    a, b, c = Iri(EX + "A"), Iri(EX + "B"), Iri(EX + "C")
    store.add(a, DT.before, b)
    store.add(b, DT.before, c)
    run_all(store)
    assert store.contains(a, DT.before, c)
    assert store.contains(c, DT.after, a)
    assert store.contains(b, DT.after, a)


def test_battles_inverse_via_period():
    store, _ = build_store(["battles_relative_dating.ttl", "battle_reference_dated.ttl"])
    mekhe = Iri(EX + "data/BattleOfMekhe")
    derkheule = Iri(EX + "data/BattleOfDerkheule")
    assert store.contains(derkheule, DT.after, mekhe)
    assert store.contains(mekhe, DT.before, derkheule)


def test_relation_propagates_between_levels():
    store = fresh_store()
    r1, r2 = Iri(EX + "E1"), Iri(EX + "E2")
    t1, t2 = Blank("t1"), Blank("t2")
    for interval, resource in ((t1, r1), (t2, r2)):
        thing = Blank(f"th_{resource.value[-1]}")
        store.add(interval, A, DT.During)
        store.add(interval, DT.exp, thing)
        store.add(thing, A, DT.TemporalThing)
        store.add(thing, RDF.value, resource)
    store.add(r1, DT.before, r2)
    run_all(store)
    assert store.contains(t1, DT.before, t2)   # down to the intervals
    assert store.contains(t2, DT.after, t1)
    # And a relation stated between intervals reaches the resources.
    store2 = fresh_store()
    for interval, resource in ((t1, r1), (t2, r2)):
        thing = Blank(f"th_{resource.value[-1]}")
        store2.add(interval, A, DT.During)
        store2.add(interval, DT.exp, thing)
        store2.add(thing, A, DT.TemporalThing)
        store2.add(thing, RDF.value, resource)
    store2.add(t1, DT.before, t2)
    run_all(store2)
    assert store2.contains(r1, DT.before, r2)


def test_closure_matches_floyd_warshall_on_random_dags():
    rng = random.Random(17)
    for _ in range(10):
        n = rng.randrange(4, 20)
        order = list(range(n))
        rng.shuffle(order)
        edges = set()
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.2:
                    edges.add((order[i], order[j]))
        store = fresh_store()
        nodes = [Iri(f"{EX}n{i}") for i in range(n)]
        for x, y in edges:
            store.add(nodes[x], DT.before, nodes[y])
        run_all(store)
        expected = oracles.floyd_warshall_closure(n, edges)
        got = {(i, j) for i, j in itertools.product(range(n), repeat=2)
               if store.contains(nodes[i], DT.before, nodes[j])}
        assert got == expected
        inverse = {(j, i) for i, j in expected}
        got_after = {(i, j) for i, j in itertools.product(range(n), repeat=2)
                     if store.contains(nodes[i], DT.after, nodes[j])}
        assert got_after == inverse


def test_allen_cycle_detected():
    store, _ = build_store(["bad_allen_loop.ttl"])
    violations = check_allen_cycles(store)
    assert violations
    assert all(v.kind == ViolationKind.ALLEN_CYCLE for v in violations)


# ---------------------------------------------------------------------------
# Included closure
# ---------------------------------------------------------------------------

def expected_included_facts() -> set:
    chain = [GRAN_CLASS[g] for g in Granularity]
    facts = set()
    for i, coarse in enumerate(chain):
        for fine in chain[i + 1:]:
            facts.add((fine, coarse))
    day_coarser = [GRAN_CLASS[g] for g in (Granularity.WEEK, Granularity.MONTH,
                                           Granularity.YEAR, Granularity.CENTURY)]
    day_subclasses = [DT.WeekDay, DT.GenericDay]
    day_subclasses += list(WEEKDAY_CLASS.values()) + list(GENERIC_CLASS.values())
    for sub in day_subclasses:
        for coarse in day_coarser:
            facts.add((sub, coarse))
    month_coarser = [GRAN_CLASS[Granularity.YEAR], GRAN_CLASS[Granularity.CENTURY]]
    for sub in MONTH_CLASS.values():
        for coarse in month_coarser:
            facts.add((sub, coarse))
    return facts


def test_included_closure_exhaustive():
    store = fresh_store()
    run_all(store)
    got = {(b["a"], b["b"]) for b in store.match(
        [Pattern(Var("a"), DT.included, Var("b"))])}
    expected = expected_included_facts()
    assert got == expected
    # 28 chain pairs plus the subclass-propagated ones.
    chain_pairs = {(a, b) for a, b in got
                   if a in set(GRAN_CLASS.values()) and b in set(GRAN_CLASS.values())}
    assert len(chain_pairs) == 28


def test_included_subclass_propagation_example():
    store = fresh_store()
    run_all(store)
    sunday = WEEKDAY_CLASS[Weekday.SUNDAY]
    assert store.contains(sunday, DT.included, GRAN_CLASS[Granularity.WEEK])
    assert store.contains(sunday, DT.included, GRAN_CLASS[Granularity.MONTH])
    assert store.contains(GRAN_CLASS[Granularity.MONTH], DT.included,
                          GRAN_CLASS[Granularity.CENTURY])


# ---------------------------------------------------------------------------
# Schema entailment
# ---------------------------------------------------------------------------

def test_type_propagation_up_the_day_hierarchy():
    store = fresh_store()
    node = Blank("d")
    store.add(node, A, WEEKDAY_CLASS[Weekday.TUESDAY])
    run_all(store)
    for cls in (DT.WeekDay, DT.Day, DT.TemporalUnit):
        assert store.contains(node, A, cls)


def test_property_propagation():
    store = fresh_store()
    x, y = Blank("x"), Blank("y")
    store.add(x, DT.hasYear, y)
    run_all(store)
    assert store.contains(x, DT.hasTemporalUnit, y)
    assert store.contains(x, DT.hasDatation, y) is False  # hasYear is a unit prop


def test_entailment_idempotent():
    store, _ = build_store()
    report = run_all(store, today=REFERENCE_TODAY)
    assert report.per_rule_firings["rdfs"] == 0


# ---------------------------------------------------------------------------
# Fixed point behavior
# ---------------------------------------------------------------------------

def test_run_all_monotone_and_idempotent_on_corpus():
    store, report = build_store()
    assert report.triples_before <= report.triples_after_entailment <= report.triples_after
    again = run_all(store, today=REFERENCE_TODAY)
    assert sum(again.per_rule_firings.values()) == 0
    assert again.triples_before == again.triples_after


def test_empty_store_only_schema_closure():
    store = fresh_store()
    report = run_all(store)
    assert report.triples_after >= report.triples_before
    assert report.per_rule_firings["duration_end"] == 0
    assert report.per_rule_firings["period_dates"] == 0


def test_rule_order_confluence():
    baseline = None
    for trial in range(5):
        store, _ = build_store(normalize=False)
        groups = build_rule_groups(today=REFERENCE_TODAY)
        random.Random(trial).shuffle(groups)
        run_all(store, groups, today=REFERENCE_TODAY)
        state = frozenset((t.s, t.p, t.o, t.g) for t in store.triples())
        if baseline is None:
            baseline = state
        assert state == baseline


def test_round_limit_raises():
    store, _ = build_store(normalize=False)
    with pytest.raises(RuleDivergenceError):
        run_all(store, today=REFERENCE_TODAY, max_rounds=1)


def test_report_shape():
    store, report = build_store()
    assert set(report.per_rule_firings) == {
        "rdfs", "month_names", "leap_years", "period_dates", "duration_end",
        "allen_closure", "included_closure"}
    assert report.rounds >= 1


# ---------------------------------------------------------------------------
# Consistency checks
# ---------------------------------------------------------------------------

def test_clean_corpus_has_no_violations(corpus_store):
    assert run_checks(corpus_store) == []


def test_swapped_cycle_fixture_violates():
    store, _ = build_store(["bad_cycle_inside_interval.ttl"])
    kinds = [v.kind for v in check_cycle_consistency(store)]
    assert ViolationKind.CYCLE_GRANULARITY in kinds


def test_clean_cycle_fixtures_pass():
    store, _ = build_store(["cycle_first_sunday_april.ttl", "interval_sampled_hours.ttl"])
    assert check_cycle_consistency(store) == []


def test_weekday_mismatch_detected():
    store, _ = build_store(["bad_weekday_date.ttl"])
    violations = check_cycle_consistency(store)
    assert [v.kind for v in violations] == [ViolationKind.WEEKDAY_MISMATCH]
    assert "Friday" in violations[0].detail


def test_correct_weekday_passes():
    store, _ = build_store(["date_calendar_writing.ttl", "date_deictic_today.ttl"])
    assert check_cycle_consistency(store) == []


def test_month_range_violation():
    store = fresh_store()
    node = Blank("m")
    store.add(node, DT.month, Literal(14))
    run_all(store)
    violations = check_month_ranges(store)
    assert [v.kind for v in violations] == [ViolationKind.MONTH_RANGE]


def test_violations_are_reproducible():
    store, _ = build_store(["bad_cycle_inside_interval.ttl", "bad_weekday_date.ttl",
                            "bad_allen_loop.ttl"])
    first = run_checks(store)
    second = run_checks(store)
    assert first == second
    assert first  # all three bad fixtures surface something
