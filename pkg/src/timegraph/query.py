"""Temporal query families over a normalized store.

All operations are read-only. A ``QueryEngine`` carries the session
configuration: the reference date for deictic data, the predicate-path
depth bound, and the day-enumeration horizon.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .civil import (
    Granularity, Weekday, century_of_year, days_in_month, from_ordinal,
    to_ordinal, week_of_month, weekday_of, GenericDay,
)
from .errors import (
    InvalidDateError, NotConvexlyDatedError, RangeTooLargeError,
    TimegraphError, UnderspecifiedError,
)
from .model import (
    Cycle, Interval, PartialDate, cycle_from_node, interval_from_node,
    resolve_deictic,
)
from .rules import ANNOTATION_ACCESSORS
from .store import (
    Blank, Iri, NotExists, Pattern, PathPlus, Term, TripleStore, Triple,
    Var, term_key,
)
from .vocab import A, DT, GRAN_CLASS, WEEKDAY_CLASS


@dataclass(frozen=True)
class DateQuery:
    """A concrete (possibly year- or month-resolution) query date.

    The weekday is filled in automatically for full dates; passing an
    inconsistent one raises InvalidDateError.
    """

    year: int
    month: Optional[int] = None
    day: Optional[int] = None
    weekday: Optional[Weekday] = None

    def __post_init__(self):
        if self.year < 1:
            raise InvalidDateError(f"year must be >= 1, got {self.year}")
        if self.month is not None and not 1 <= self.month <= 12:
            raise InvalidDateError(f"month out of range: {self.month}")
        if self.day is not None:
            if self.month is None:
                raise InvalidDateError("a day needs a month")
            if not 1 <= self.day <= days_in_month(self.month, self.year):
                raise InvalidDateError(
                    f"no day {self.day} in {self.year}-{self.month:02d}")
        if self.is_full:
            actual = weekday_of(self.year, self.month, self.day)
            if self.weekday is None:
                object.__setattr__(self, "weekday", actual)
            elif self.weekday != actual:
                raise InvalidDateError(
                    f"{self.year}-{self.month:02d}-{self.day:02d} is a "
                    f"{actual.name.capitalize()}, not a {self.weekday.name.capitalize()}")
        elif self.weekday is not None:
            raise InvalidDateError("a weekday needs a full date")

    @property
    def is_full(self) -> bool:
        return self.month is not None and self.day is not None

    @property
    def week(self) -> Optional[int]:
        return week_of_month(self.day) if self.day is not None else None

    def ordinal_range(self) -> tuple[int, int]:
        lo_month = self.month or 1
        hi_month = self.month or 12
        lo_day = self.day or 1
        hi_day = self.day or days_in_month(hi_month, self.year)
        return (to_ordinal(self.year, lo_month, lo_day),
                to_ordinal(self.year, hi_month, hi_day))

    @classmethod
    def for_ordinal(cls, ordinal: int) -> "DateQuery":
        y, m, d = from_ordinal(ordinal)
        return cls(year=y, month=m, day=d)


@dataclass(frozen=True)
class TemporalityDescription:
    """A top-level temporal node plus everything hanging off it."""

    root: Term
    closure: frozenset


MATCH_INTERVAL = "interval"
MATCH_CYCLE = "cycle"
MATCH_PERIOD = "period"
MATCH_INDETERMINATE = "indeterminate"

_UNIT_SECONDS = {
    Granularity.HOUR: 3600,
    Granularity.MINUTE: 60,
    Granularity.SECOND: 1,
}


@dataclass
class _Entry:
    """One annotated temporal root, lifted once per query."""

    root: Term
    resources: tuple
    interval: Optional[Interval]
    cycle: Optional[Cycle]
    period_dated: bool


class QueryEngine:
    """Read-only query interface over a normalized (rules already run)
    store."""

    def __init__(self, store: TripleStore, *, today: Optional[PartialDate] = None,
                 path_depth: int = 8, horizon: int = 3700):
        self.store = store
        self.today = today
        self.path_depth = path_depth
        self.horizon = horizon

    # -- temporality of a resource --------------------------------------

    def temporality_of(self, resource: Iri) -> list[TemporalityDescription]:
        """Every top-level temporal node annotating the resource through
        any of the three forms (direct resource, reified triple, named
        graph); period markers and nested nodes are excluded."""
        roots = [node for node in self._annotating_nodes(resource) if self._is_root(node)]
        roots.sort(key=term_key)
        return [TemporalityDescription(root, frozenset(self._closure(root)))
                for root in roots]

    def _annotating_nodes(self, resource: Iri) -> list[Term]:
        store = self.store
        found: list[Term] = []
        x, th, gn, g = Var("x"), Var("th"), Var("gn"), Var("g")
        for acc in ANNOTATION_ACCESSORS:
            for binding in store.match([
                    Pattern(th, acc, resource),
                    PathPlus(x, DT.exp, th, max_depth=self.path_depth)]):
                if binding["x"] not in found:
                    found.append(binding["x"])
        for binding in store.match([
                Pattern(gn, DT.uri, g),
                PathPlus(x, DT.exp, gn, max_depth=self.path_depth)]):
            graph = binding["g"]
            if not isinstance(graph, Iri):
                continue
            member = any(t.s == resource or t.o == resource
                         for t in store.triples(graph))
            if member and binding["x"] not in found:
                found.append(binding["x"])
        return found

    def _is_root(self, node: Term) -> bool:
        store = self.store
        if store.contains(node, A, DT.Period):
            return False
        return not store.ask([Pattern(Var("j"), Var("k"), node)])

    def _is_occurrence_root(self, node: Term) -> bool:
        """Occurrence matching collapses nested temporal structure to its
        outermost node, but tolerates incoming before/after arcs that the
        closure rules attach to the intervals of related resources."""
        store = self.store
        if store.contains(node, A, DT.Period):
            return False
        return not store.ask([Pattern(Var("j"), DT.exp, node)])

    def _closure(self, root: Term) -> list[Triple]:
        """All triples reachable from the root, descending through blank
        nodes (the temporal structure is a blank-node tree)."""
        out: list[Triple] = []
        seen = {root}
        frontier = [root]
        while frontier:
            node = frontier.pop()
            for triple in self.store.outgoing(node):
                out.append(triple)
                obj = triple.o
                if isinstance(obj, Blank) and obj not in seen:
                    seen.add(obj)
                    frontier.append(obj)
        return out

    # -- recurring resources ---------------------------------------------

    def recurring_resources(self, freq: Union[Granularity, Weekday]
                            ) -> list[tuple[Iri, TemporalityDescription]]:
        """Cycle-annotated resources repeating at the given unit (or on
        the given weekday), skipping sampled cycles."""
        store = self.store
        c, u = Var("c"), Var("u")
        no_sample = NotExists((Pattern(c, DT.sample, Var("sample_t")),))
        if isinstance(freq, Weekday):
            d, dn, day = Var("d"), Var("dn"), Var("day")
            atoms = [Pattern(c, A, DT.Cycle), no_sample,
                     Pattern(c, DT.exp, d), Pattern(d, A, DT.During),
                     Pattern(d, DT.hasDate, dn), Pattern(dn, DT.hasDay, day),
                     Pattern(day, A, WEEKDAY_CLASS[freq])]
        else:
            atoms = [Pattern(c, A, DT.Cycle), Pattern(c, DT.every, u),
                     Pattern(u, A, GRAN_CLASS[freq]), no_sample]
        results: list[tuple[Iri, TemporalityDescription]] = []
        seen = set()
        for binding in store.match(atoms):
            cycle = binding["c"]
            for resource in self._resources_of(cycle):
                key = (resource, cycle)
                if key not in seen:
                    seen.add(key)
                    results.append((resource,
                                    TemporalityDescription(cycle, frozenset(self._closure(cycle)))))
        results.sort(key=lambda pair: (term_key(pair[0]), term_key(pair[1].root)))
        return results

    def _resources_of(self, root: Term) -> list[Iri]:
        store = self.store
        resources: list[Iri] = []
        th, r, gn, g = Var("th"), Var("r"), Var("gn"), Var("g")
        for acc in ANNOTATION_ACCESSORS:
            for binding in store.match([
                    PathPlus(root, DT.exp, th, max_depth=self.path_depth),
                    Pattern(th, acc, r)]):
                value = binding["r"]
                if isinstance(value, Iri) and value not in resources:
                    resources.append(value)
        for binding in store.match([
                PathPlus(root, DT.exp, gn, max_depth=self.path_depth),
                Pattern(gn, DT.uri, g)]):
            graph = binding["g"]
            if not isinstance(graph, Iri):
                continue
            for triple in store.triples(graph):
                for term in (triple.s, triple.o):
                    if isinstance(term, Iri) and term not in resources:
                        resources.append(term)
        return resources

    # -- relative (before/after) resources --------------------------------

    def relative_resources(self, resource: Iri, relation) -> list[Iri]:
        """Resources whose temporality stands before/after the given
        resource's convex temporality (stated, period-mediated, or
        derived by closure)."""
        from .model import Relation
        if not isinstance(relation, Relation):
            raise TimegraphError(f"not a relation: {relation!r}")
        roots = self._annotating_nodes(resource)
        convex = any(self.store.contains(root, A, DT.During) for root in roots)
        if not convex:
            raise NotConvexlyDatedError(
                f"{resource.value} has no convex temporality")
        x = Var("x")
        out = []
        for binding in self.store.match([Pattern(x, relation.iri, resource)]):
            candidate = binding["x"]
            if (isinstance(candidate, Iri) and candidate != resource
                    and not self.store.contains(candidate, A, DT.Period)
                    and candidate not in out):
                out.append(candidate)
        out.sort(key=term_key)
        return out

    # -- resources on a date ------------------------------------------------

    def resources_on(self, dq: DateQuery) -> list[tuple[Iri, str]]:
        """Resources whose temporality covers the query date, labeled
        with the kind of match (interval, cycle, period, or
        indeterminate for unanchored sampled cycles)."""
        results: list[tuple[Iri, str]] = []
        for entry in self._entries():
            kind = self._entry_matches(entry, dq)
            if kind is None:
                continue
            for resource in entry.resources:
                pair = (resource, kind)
                if pair not in results:
                    results.append(pair)
        results.sort(key=lambda pair: (term_key(pair[0]), pair[1]))
        return results

    def resources_in_range(self, begin: PartialDate, end: PartialDate,
                           horizon: Optional[int] = None) -> list[Iri]:
        """Resources with at least one occurrence inside [begin, end],
        decided by bounded day-by-day enumeration."""
        horizon = horizon or self.horizon
        lo = _range_of_date(self._resolved(begin))
        hi = _range_of_date(self._resolved(end))
        if lo is None or hi is None:
            raise UnderspecifiedError("range endpoints must resolve to civil days")
        start, stop = lo[0], hi[1]
        if start > stop:
            raise InvalidDateError("range begin is after range end")
        if stop - start + 1 > horizon:
            raise RangeTooLargeError(
                f"range of {stop - start + 1} days exceeds horizon {horizon}")
        entries = self._entries()
        matched: list[Iri] = []
        remaining = list(entries)
        for ordinal in range(start, stop + 1):
            if not remaining:
                break
            probe = DateQuery.for_ordinal(ordinal)
            still: list[_Entry] = []
            for entry in remaining:
                kind = self._entry_matches(entry, probe)
                if kind is not None and kind != MATCH_INDETERMINATE:
                    matched.extend(r for r in entry.resources if r not in matched)
                else:
                    still.append(entry)
            remaining = still
        matched.sort(key=term_key)
        return matched

    # -- lifted entries ----------------------------------------------------

    def _entries(self) -> list[_Entry]:
        store = self.store
        roots: list[Term] = []
        x, th, gn = Var("x"), Var("th"), Var("gn")
        for acc in ANNOTATION_ACCESSORS:
            for binding in store.match([
                    Pattern(th, acc, Var("r")),
                    PathPlus(x, DT.exp, th, max_depth=self.path_depth)]):
                node = binding["x"]
                if node not in roots and self._is_occurrence_root(node):
                    roots.append(node)
        for binding in store.match([
                Pattern(gn, DT.uri, Var("g")),
                PathPlus(x, DT.exp, gn, max_depth=self.path_depth)]):
            node = binding["x"]
            if node not in roots and self._is_occurrence_root(node):
                roots.append(node)
        roots.sort(key=term_key)
        entries = []
        for root in roots:
            resources = tuple(self._resources_of(root))
            if not resources:
                continue
            interval = None
            cycle = None
            if store.contains(root, A, DT.Cycle):
                cycle = cycle_from_node(store, root)
            elif store.contains(root, A, DT.During):
                interval = interval_from_node(store, root)
            if interval is None and cycle is None:
                continue
            period_dated = self._has_period_marker(root)
            entries.append(_Entry(root, resources, interval, cycle, period_dated))
        return entries

    def _has_period_marker(self, node: Term) -> bool:
        for prop in (DT.hasDate, DT.hasBegin, DT.hasEnd):
            for obj in self.store.objects(node, prop):
                if self.store.contains(obj, A, DT.Period):
                    return True
        return False

    # -- the matching core ---------------------------------------------------

    def _resolved(self, date: Optional[PartialDate]) -> Optional[PartialDate]:
        if date is None:
            return None
        if isinstance(date.day_kind, GenericDay):
            reference = date.context or self.today
            if reference is None:
                return None
            try:
                return resolve_deictic(date, reference)
            except TimegraphError:
                return None
        return date

    def _entry_matches(self, entry: _Entry, dq: DateQuery) -> Optional[str]:
        if entry.cycle is not None:
            kind = self._cycle_matches(entry.cycle, dq, enclosing=None)
            return kind
        interval = entry.interval
        if interval is None:
            return None
        if interval.inner_cycle is not None:
            kind = self._cycle_matches(interval.inner_cycle, dq, enclosing=interval)
            return kind
        if self._interval_matches(interval, dq):
            return MATCH_PERIOD if entry.period_dated else MATCH_INTERVAL
        return None

    def _interval_matches(self, interval: Interval, dq: DateQuery) -> bool:
        if interval.date is not None:
            date = self._resolved(interval.date)
            return date is not None and _granules_cover(date, dq)
        begin = self._resolved(interval.begin)
        end = self._resolved(interval.end)
        if begin is None and end is None:
            return False
        q_lo, q_hi = dq.ordinal_range()
        if begin is not None:
            b_range = _range_of_date(begin)
            if b_range is None:
                return False
            if q_lo < b_range[0]:
                return False
        if end is not None:
            e_range = _range_of_date(end)
            if e_range is None:
                return False
            if q_hi > e_range[1]:
                return False
        return True

    def _cycle_matches(self, cycle: Cycle, dq: DateQuery,
                       enclosing: Optional[Interval]) -> Optional[str]:
        if enclosing is not None:
            bounds = Interval(begin=enclosing.begin, end=enclosing.end) \
                if (enclosing.begin or enclosing.end) else None
            if bounds is not None and not self._interval_matches(bounds, dq):
                return None
        occurrence = self._resolved(cycle.occurrence.date if cycle.occurrence else None)
        if cycle.sample is None and occurrence is not None:
            return MATCH_CYCLE if _pattern_covers(occurrence, dq) else None
        if cycle.sample is None and enclosing is None:
            return None  # nothing pins the repetition
        # Sampled, or an unsampled bounded cycle without an occurrence
        # pattern: modular matching from the anchor (unsampled = step 1).
        anchor = self._sample_anchor(cycle, enclosing)
        if anchor is None:
            return MATCH_INDETERMINATE
        if not dq.is_full:
            return None
        hit = _sampled_occurrence_on_day(anchor, cycle.every, cycle.sample or 1,
                                         to_ordinal(dq.year, dq.month, dq.day))
        return MATCH_CYCLE if hit else None

    def _sample_anchor(self, cycle: Cycle, enclosing: Optional[Interval]
                       ) -> Optional[PartialDate]:
        candidates = []
        if enclosing is not None:
            candidates += [enclosing.begin, enclosing.date]
        if cycle.occurrence is not None:
            candidates += [cycle.occurrence.begin, cycle.occurrence.date]
        for candidate in candidates:
            resolved = self._resolved(candidate)
            if resolved is not None and resolved.is_fully_dated:
                return resolved
        return None


# ==========================================================================
# Date-coverage helpers
# ==========================================================================

def _range_of_date(date: Optional[PartialDate]) -> Optional[tuple[int, int]]:
    """Smallest and largest civil day a partial date can denote; None when
    it has no absolute position (no year or century)."""
    if date is None:
        return None
    year = date.year
    if year is None:
        if date.century is None:
            return None
        from .civil import century_year_span
        first, last = century_year_span(date.century)
        return (to_ordinal(first, 1, 1), to_ordinal(last, 12, 31))
    lo_month = date.month or 1
    hi_month = date.month or 12
    lo_day = date.day_of_month or 1
    hi_day = date.day_of_month or days_in_month(hi_month, year)
    return (to_ordinal(year, lo_month, lo_day), to_ordinal(year, hi_month, hi_day))


def _granules_cover(date: PartialDate, dq: DateQuery) -> bool:
    """Containment for single-date intervals: every granule the date
    specifies must be matched by the query; unspecified granules are
    wildcards."""
    if date.hour is not None or date.minute is not None or date.second is not None:
        return False  # the query has day resolution at best
    if date.century is not None and century_of_year(dq.year) != date.century:
        return False
    if date.year is not None and dq.year != date.year:
        return False
    if date.month is not None and dq.month != date.month:
        return False
    if date.day_of_month is not None and dq.day != date.day_of_month:
        return False
    if isinstance(date.day_kind, Weekday) and dq.weekday != date.day_kind:
        return False
    if date.week_of_month is not None and dq.week != date.week_of_month:
        return False
    return True


def _pattern_covers(occurrence: PartialDate, dq: DateQuery) -> bool:
    """Recurring-occurrence matching: the occurrence's specified fields
    pin the repeating pattern, and the query must satisfy each."""
    if occurrence.hour is not None or occurrence.minute is not None \
            or occurrence.second is not None:
        return False
    if occurrence.year is not None and dq.year != occurrence.year:
        return False
    if occurrence.century is not None and century_of_year(dq.year) != occurrence.century:
        return False
    if occurrence.month is not None and dq.month != occurrence.month:
        return False
    if occurrence.day_of_month is not None and dq.day != occurrence.day_of_month:
        return False
    if isinstance(occurrence.day_kind, Weekday):
        if dq.weekday is None or dq.weekday != occurrence.day_kind:
            return False
    if occurrence.week_of_month is not None:
        if dq.week is None or dq.week != occurrence.week_of_month:
            return False
    return True


def _sampled_occurrence_on_day(anchor: PartialDate, unit: Granularity,
                               step: int, day_ordinal: int) -> bool:
    """Does 'every `step` `unit`s from anchor' fire on the given day?
    Modular arithmetic from the anchor."""
    anchor_ordinal = anchor.ordinal()
    if unit in _UNIT_SECONDS:
        unit_seconds = _UNIT_SECONDS[unit]
        anchor_seconds = (anchor_ordinal * 86400
                          + (anchor.hour or 0) * 3600
                          + (anchor.minute or 0) * 60
                          + (anchor.second or 0))
        day_start = day_ordinal * 86400
        day_end = day_start + 86400
        step_seconds = step * unit_seconds
        if anchor_seconds >= day_end:
            return False
        k = max(0, -(-(day_start - anchor_seconds) // step_seconds))
        return anchor_seconds + k * step_seconds < day_end
    if day_ordinal < anchor_ordinal:
        return False
    if unit is Granularity.DAY:
        return (day_ordinal - anchor_ordinal) % step == 0
    if unit is Granularity.WEEK:
        return (day_ordinal - anchor_ordinal) % (7 * step) == 0
    y, m, d = from_ordinal(day_ordinal)
    if unit is Granularity.MONTH:
        if d != anchor.day_of_month:
            return False
        months = (y - anchor.year) * 12 + (m - anchor.month)
        return months >= 0 and months % step == 0
    if unit is Granularity.YEAR:
        if m != anchor.month or d != anchor.day_of_month:
            return False
        return (y - anchor.year) >= 0 and (y - anchor.year) % step == 0
    if unit is Granularity.CENTURY:
        if m != anchor.month or d != anchor.day_of_month:
            return False
        return (y - anchor.year) >= 0 and (y - anchor.year) % (100 * step) == 0
    return False
