"""Typed temporal values (partial dates, durations, intervals, cycles,
annotation targets) with calendar arithmetic and bidirectional lowering
to the store's triple form.

All values are immutable after construction; the calendar operations are
pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable, Mapping, Optional, Union

from . import civil
from .civil import (
    DayKind, GenericDay, GENERIC_DAY_OFFSETS, Granularity, PLAIN_DAY,
    Weekday, days_in_month, days_in_year, from_ordinal,
    min_days_in_month, to_ordinal, weekday_of,
)
from .errors import (
    EmptyDateError, InvalidDateError, NotDeicticError, TimegraphError,
    UnderspecifiedError,
)
from .store import Blank, Iri, Literal, Term, Triple, TripleStore, term_key
from .vocab import (
    A, CLASS_GENERIC, CLASS_GRAN, CLASS_MONTH, CLASS_WEEKDAY, DT,
    GENERIC_CLASS, GRAN_CLASS, GRAN_DATE_PROP, GRAN_VALUE_PROP, MONTH_CLASS,
    RDF, WEEKDAY_CLASS,
)

Minter = Callable[[], Blank]


def blank_minter(prefix: str = "b") -> Minter:
    """Fresh-blank factory for lowering outside a store."""
    counter = [0]

    def mint() -> Blank:
        counter[0] += 1
        return Blank(f"{prefix}{counter[0]}")

    return mint


# ==========================================================================
# Partial dates
# ==========================================================================

@dataclass(frozen=True)
class PartialDate:
    """A calendar date with any subset of granules set.

    ``context`` holds the reference date of a deictic day, and stays on
    the concrete date produced by resolution so the provenance is kept.
    """

    century: Optional[int] = None
    year: Optional[int] = None
    month: Optional[int] = None
    week_of_month: Optional[int] = None
    day_kind: Optional[DayKind] = None
    day_of_month: Optional[int] = None
    hour: Optional[int] = None
    minute: Optional[int] = None
    second: Optional[int] = None
    context: Optional["PartialDate"] = None

    def __post_init__(self):
        if self.day_of_month is not None and self.day_kind is None:
            object.__setattr__(self, "day_kind", PLAIN_DAY)
        if not self._has_any_granule():
            raise EmptyDateError("a date needs at least one granule")
        self._check_ranges()
        if self.context is not None and self.day_kind is None:
            raise InvalidDateError("context requires a generic (or resolved) day kind")
        if (isinstance(self.day_kind, Weekday) and self.is_fully_dated
                and weekday_of(self.year, self.month, self.day_of_month) != self.day_kind):
            raise InvalidDateError(
                f"{self.year}-{self.month:02d}-{self.day_of_month:02d} "
                f"is not a {self.day_kind.name.capitalize()}")

    def _has_any_granule(self) -> bool:
        return any(v is not None for v in (
            self.century, self.year, self.month, self.week_of_month,
            self.day_kind, self.day_of_month, self.hour, self.minute, self.second))

    def _check_ranges(self):
        checks = [
            ("century", self.century, 1, 10_000),
            ("year", self.year, 1, 1_000_000),
            ("month", self.month, 1, 12),
            ("week_of_month", self.week_of_month, 1, 5),
            ("day_of_month", self.day_of_month, 1, 31),
            ("hour", self.hour, 0, 23),
            ("minute", self.minute, 0, 59),
            ("second", self.second, 0, 59),
        ]
        for name, value, lo, hi in checks:
            if value is not None and not lo <= value <= hi:
                raise InvalidDateError(f"{name} out of range: {value}")
        if self.day_of_month is not None and self.month is not None:
            limit = (days_in_month(self.month, self.year) if self.year is not None
                     else max(min_days_in_month(self.month), 29 if self.month == 2 else 0))
            if self.day_of_month > limit:
                raise InvalidDateError(
                    f"no day {self.day_of_month} in month {self.month}")

    @property
    def is_fully_dated(self) -> bool:
        return None not in (self.year, self.month, self.day_of_month)

    @property
    def is_deictic(self) -> bool:
        return isinstance(self.day_kind, GenericDay)

    def finest(self) -> Granularity:
        if self.second is not None:
            return Granularity.SECOND
        if self.minute is not None:
            return Granularity.MINUTE
        if self.hour is not None:
            return Granularity.HOUR
        if self.day_of_month is not None or self.day_kind is not None:
            return Granularity.DAY
        if self.week_of_month is not None:
            return Granularity.WEEK
        if self.month is not None:
            return Granularity.MONTH
        if self.year is not None:
            return Granularity.YEAR
        if self.century is not None:
            return Granularity.CENTURY
        raise EmptyDateError("empty date")

    def ordinal(self) -> int:
        if not self.is_fully_dated:
            raise UnderspecifiedError("year, month and day are needed for an ordinal")
        return to_ordinal(self.year, self.month, self.day_of_month)


def finest_granularity(d: PartialDate) -> Granularity:
    """Finest granularity for which a field is set (day kinds count as Day)."""
    return d.finest()


def civil_date(year: int, month: int, day: int, **extra) -> PartialDate:
    """Fully dated PartialDate with the weekday filled in."""
    return PartialDate(year=year, month=month, day_of_month=day,
                       day_kind=weekday_of(year, month, day), **extra)


# ==========================================================================
# Durations
# ==========================================================================

@dataclass(frozen=True)
class Duration:
    """Multi-granularity span, e.g. 2 hours 30 minutes.

    ``granules`` accepts a mapping at construction and is normalized to a
    coarse-to-fine tuple of (granularity, amount) pairs.
    """

    granules: tuple

    def __init__(self, granules: Union[Mapping[Granularity, int], Iterable[tuple]]):
        if isinstance(granules, Mapping):
            items = list(granules.items())
        else:
            items = list(granules)
        if not items:
            raise InvalidDateError("a duration needs at least one granule")
        for g, amount in items:
            if not isinstance(g, Granularity):
                raise InvalidDateError(f"not a granularity: {g!r}")
            if not isinstance(amount, int) or amount <= 0:
                raise InvalidDateError(f"duration amounts must be positive: {g.name}={amount!r}")
        items.sort(key=lambda pair: pair[0].rank)
        seen = [g for g, _ in items]
        if len(set(seen)) != len(seen):
            raise InvalidDateError("duplicate granularity in duration")
        object.__setattr__(self, "granules", tuple(items))

    def as_dict(self) -> dict[Granularity, int]:
        return dict(self.granules)

    def finest(self) -> Granularity:
        return self.granules[-1][0]


# ==========================================================================
# Intervals and cycles
# ==========================================================================

@dataclass(frozen=True)
class Interval:
    """A convex interval: a single date, a begin/end pair, a begin plus
    duration, or a bound around an inner cycle."""

    date: Optional[PartialDate] = None
    begin: Optional[PartialDate] = None
    end: Optional[PartialDate] = None
    duration: Optional[Duration] = None
    inner_cycle: Optional["Cycle"] = None

    def __post_init__(self):
        if self.date is not None and (self.begin or self.end or self.duration):
            raise InvalidDateError("a dated interval cannot also carry begin/end/duration")
        if all(v is None for v in (self.date, self.begin, self.end,
                                   self.duration, self.inner_cycle)):
            raise InvalidDateError("an interval needs at least one component")

    @property
    def is_closed(self) -> bool:
        if self.date is not None:
            return True
        if self.begin is not None and (self.end is not None or self.duration is not None):
            return True
        return False

    @property
    def is_infinite(self) -> bool:
        one_bound = (self.begin is None) != (self.end is None)
        return one_bound and self.duration is None and self.date is None


@dataclass(frozen=True)
class Cycle:
    """Non-convex (recurring) interval: a repetition unit, an optional
    convex occurrence, and an optional sampling step (every N units)."""

    every: Granularity
    occurrence: Optional[Interval] = None
    sample: Optional[int] = None

    def __post_init__(self):
        if self.sample is not None and (not isinstance(self.sample, int) or self.sample <= 0):
            raise InvalidDateError(f"sample must be a positive integer: {self.sample!r}")


# ==========================================================================
# Annotation targets and Allen links
# ==========================================================================

@dataclass(frozen=True)
class Resource:
    iri: Iri


@dataclass(frozen=True)
class ReifiedTriple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        for part in (self.subject, self.predicate, self.object):
            if not isinstance(part, (Iri, Blank, Literal)):
                raise InvalidDateError(f"reified components must be concrete terms: {part!r}")


@dataclass(frozen=True)
class NamedGraph:
    iri: Iri


AnnotationTarget = Union[Resource, ReifiedTriple, NamedGraph]


@dataclass(frozen=True)
class PeriodMarker:
    """A dated resource reused as a temporal reference point."""

    resource: Iri


class Relation(Enum):
    BEFORE = "before"
    AFTER = "after"

    @property
    def iri(self) -> Iri:
        return DT.before if self is Relation.BEFORE else DT.after

    @property
    def inverse(self) -> "Relation":
        return Relation.AFTER if self is Relation.BEFORE else Relation.BEFORE


@dataclass(frozen=True)
class AllenLink:
    """A before/after statement between intervals, resources, or a
    resource used as a period marker; never between cycles."""

    relation: Relation
    left: Term
    right: Union[Term, PeriodMarker]


# ==========================================================================
# Calendar operations
# ==========================================================================

def days_in(unit: Granularity, context: PartialDate) -> int:
    """Day count of the unit instance named by the context date."""
    if unit is Granularity.WEEK:
        return 7
    if unit is Granularity.DAY:
        return 1
    if unit is Granularity.YEAR:
        if context.year is None:
            raise UnderspecifiedError("a year value is needed")
        return days_in_year(context.year)
    if unit is Granularity.MONTH:
        if context.month is None:
            raise UnderspecifiedError("a month value is needed")
        if context.month == 2 and context.year is None:
            raise UnderspecifiedError("February needs a year")
        return days_in_month(context.month, context.year)
    if unit is Granularity.CENTURY:
        century = context.century
        if century is None:
            if context.year is None:
                raise UnderspecifiedError("a century or year value is needed")
            century = civil.century_of_year(context.year)
        first, last = civil.century_year_span(century)
        return sum(days_in_year(y) for y in range(first, last + 1))
    raise InvalidDateError(f"{unit.name} has no whole-day count")


def resolve_deictic(d: PartialDate, reference: PartialDate) -> PartialDate:
    """Resolve a generic day against a concrete reference date.

    The result is the reference shifted by the generic day's offset, with
    the weekday recomputed and the reference recorded as context.
    """
    if not isinstance(d.day_kind, GenericDay):
        raise NotDeicticError(f"not a deictic date: {d!r}")
    if not reference.is_fully_dated:
        raise UnderspecifiedError("the reference date must carry year, month and day")
    offset = GENERIC_DAY_OFFSETS[d.day_kind]
    ordinal = reference.ordinal() + offset
    if ordinal < 1:
        raise InvalidDateError("resolution falls before year 1")
    y, m, dom = from_ordinal(ordinal)
    return replace(
        reference,
        year=y, month=m, day_of_month=dom,
        day_kind=weekday_of(y, m, dom),
        week_of_month=(civil.week_of_month(dom)
                       if reference.week_of_month is not None else None),
        context=reference,
    )


def add_duration(start: PartialDate, dur: Duration) -> PartialDate:
    """End date of an inclusive span: the last granule covered by a span
    of the given length beginning at start (n units end at start + n - 1,
    with civil-calendar carry into coarser granules)."""
    if start.is_deictic:
        if start.context is None:
            raise UnderspecifiedError("deictic start without a context date")
        start = resolve_deictic(start, start.context)
    if start.context is not None:
        start = replace(start, context=None)
    finest = dur.finest()
    result = start
    for gran, amount in dur.granules:
        offset = amount - 1 if gran is finest else amount
        if offset:
            result = shift(result, gran, offset)
    return result


def shift(d: PartialDate, gran: Granularity, amount: int) -> PartialDate:
    """Exclusive shift of one granule with carry; raises Underspecified
    when the date lacks the fields the carry needs."""
    if amount == 0:
        return d
    if gran is Granularity.SECOND:
        if d.second is None:
            raise UnderspecifiedError("no second granule to shift")
        carry, rem = divmod(d.second + amount, 60)
        d = replace(d, second=rem)
        return shift(d, Granularity.MINUTE, carry) if carry else d
    if gran is Granularity.MINUTE:
        if d.minute is None:
            raise UnderspecifiedError("no minute granule to shift")
        carry, rem = divmod(d.minute + amount, 60)
        d = replace(d, minute=rem)
        return shift(d, Granularity.HOUR, carry) if carry else d
    if gran is Granularity.HOUR:
        if d.hour is None:
            raise UnderspecifiedError("no hour granule to shift")
        carry, rem = divmod(d.hour + amount, 24)
        d = replace(d, hour=rem)
        return shift(d, Granularity.DAY, carry) if carry else d
    if gran is Granularity.WEEK:
        return shift(d, Granularity.DAY, amount * 7)
    if gran is Granularity.DAY:
        return _shift_day(d, amount)
    if gran is Granularity.MONTH:
        return _shift_month(d, amount)
    if gran is Granularity.YEAR:
        return _shift_year(d, amount)
    if gran is Granularity.CENTURY:
        if d.year is not None:
            return _shift_year(d, amount * 100)
        if d.century is not None:
            if d.century + amount < 1:
                raise InvalidDateError("shift falls before century 1")
            return replace(d, century=d.century + amount)
        raise UnderspecifiedError("no century or year granule to shift")
    raise InvalidDateError(f"cannot shift granularity {gran!r}")


def _rebuild(d: PartialDate, year, month, day) -> PartialDate:
    """Reassemble a shifted date in one step, recomputing the derived
    fields (weekday, week-of-month, century) so validation sees a
    consistent value."""
    kind = d.day_kind
    if isinstance(kind, (Weekday, GenericDay)):
        if None not in (year, month, day):
            kind = weekday_of(year, month, day)
        else:
            kind = PLAIN_DAY
    week = d.week_of_month
    if week is not None and day is not None:
        week = civil.week_of_month(day)
    century = d.century
    if century is not None and year is not None:
        century = civil.century_of_year(year)
    return replace(d, century=century, year=year, month=month, day_of_month=day,
                   day_kind=kind, week_of_month=week, context=None)


def _shift_day(d: PartialDate, amount: int) -> PartialDate:
    if d.day_of_month is None:
        raise UnderspecifiedError("no day granule to shift")
    if d.year is not None and d.month is not None:
        ordinal = to_ordinal(d.year, d.month, d.day_of_month) + amount
        if ordinal < 1:
            raise InvalidDateError("shift falls before year 1")
        y, m, dom = from_ordinal(ordinal)
        return _rebuild(d, y, m, dom)
    new_day = d.day_of_month + amount
    limit = min_days_in_month(d.month) if d.month is not None else 28
    if 1 <= new_day <= limit:
        return _rebuild(d, d.year, d.month, new_day)
    raise UnderspecifiedError("day shift crosses a month boundary without year context")


def _shift_month(d: PartialDate, amount: int) -> PartialDate:
    if d.month is None:
        raise UnderspecifiedError("no month granule to shift")
    carry, rem = divmod(d.month - 1 + amount, 12)
    new_month = rem + 1
    new_year = d.year
    if carry:
        if d.year is None:
            raise UnderspecifiedError("month shift crosses a year boundary without a year")
        new_year = d.year + carry
        if new_year < 1:
            raise InvalidDateError("shift falls before year 1")
    day = d.day_of_month
    if day is not None:
        limit = (days_in_month(new_month, new_year) if new_year is not None
                 else min_days_in_month(new_month))
        day = min(day, limit)
    return _rebuild(d, new_year, new_month, day)


def _shift_year(d: PartialDate, amount: int) -> PartialDate:
    if d.year is None:
        raise UnderspecifiedError("no year granule to shift")
    new_year = d.year + amount
    if new_year < 1:
        raise InvalidDateError("shift falls before year 1")
    day = d.day_of_month
    if (day is not None and d.month is not None
            and day > days_in_month(d.month, new_year)):
        day = days_in_month(d.month, new_year)
    return _rebuild(d, new_year, d.month, day)


# ==========================================================================
# Lowering: model values -> triples
# ==========================================================================

def _granule_node(parent: Term, gran: Granularity, cls: Iri,
                  values: list[tuple[Iri, int]], mint: Minter) -> tuple[Blank, list[Triple]]:
    node = mint()
    out = [Triple(parent, GRAN_DATE_PROP[gran], node), Triple(node, A, cls)]
    out += [Triple(node, prop, Literal(v)) for prop, v in values]
    return node, out


def date_to_triples(d: PartialDate, mint: Optional[Minter] = None) -> tuple[Blank, list[Triple]]:
    mint = mint or blank_minter()
    node = mint()
    out = [Triple(node, A, DT.Date)]
    simple = [
        (Granularity.CENTURY, d.century, GRAN_CLASS[Granularity.CENTURY]),
        (Granularity.YEAR, d.year, GRAN_CLASS[Granularity.YEAR]),
        (Granularity.HOUR, d.hour, GRAN_CLASS[Granularity.HOUR]),
        (Granularity.MINUTE, d.minute, GRAN_CLASS[Granularity.MINUTE]),
        (Granularity.SECOND, d.second, GRAN_CLASS[Granularity.SECOND]),
    ]
    for gran, value, cls in simple:
        if value is not None:
            _, triples = _granule_node(node, gran, cls,
                                       [(GRAN_VALUE_PROP[gran], value)], mint)
            out += triples
    if d.month is not None:
        # Emit both writings at once: the month-name class and the number.
        _, triples = _granule_node(node, Granularity.MONTH, MONTH_CLASS[d.month],
                                   [(GRAN_VALUE_PROP[Granularity.MONTH], d.month)], mint)
        out += triples
    if d.day_kind is not None or d.day_of_month is not None or d.week_of_month is not None:
        if isinstance(d.day_kind, Weekday):
            cls = WEEKDAY_CLASS[d.day_kind]
        elif isinstance(d.day_kind, GenericDay):
            cls = GENERIC_CLASS[d.day_kind]
        else:
            cls = DT.Day
        values: list[tuple[Iri, int]] = []
        if d.day_of_month is not None:
            values.append((DT.day, d.day_of_month))
        if d.week_of_month is not None:
            values.append((DT.week, d.week_of_month))
        day_node, triples = _granule_node(node, Granularity.DAY, cls, values, mint)
        out += triples
        if d.context is not None:
            ctx_node, ctx_triples = date_to_triples(d.context, mint)
            out.append(Triple(day_node, DT.hasContext, ctx_node))
            out += ctx_triples
    return node, out


def duration_to_triples(dur: Duration, mint: Optional[Minter] = None) -> tuple[Blank, list[Triple]]:
    mint = mint or blank_minter()
    node = mint()
    out = [Triple(node, A, DT.Duration)]
    for gran, amount in dur.granules:
        _, triples = _granule_node(node, gran, GRAN_CLASS[gran],
                                   [(DT.value, amount)], mint)
        out += triples
    return node, out


def interval_to_triples(iv: Interval, mint: Optional[Minter] = None) -> tuple[Blank, list[Triple]]:
    mint = mint or blank_minter()
    node = mint()
    out = [Triple(node, A, DT.During)]
    for prop, date in ((DT.hasDate, iv.date), (DT.hasBegin, iv.begin), (DT.hasEnd, iv.end)):
        if date is not None:
            dnode, triples = date_to_triples(date, mint)
            out.append(Triple(node, prop, dnode))
            out += triples
    if iv.duration is not None:
        dnode, triples = duration_to_triples(iv.duration, mint)
        out.append(Triple(node, DT.hasDuration, dnode))
        out += triples
    if iv.inner_cycle is not None:
        cnode, triples = cycle_to_triples(iv.inner_cycle, mint)
        out.append(Triple(node, DT.exp, cnode))
        out += triples
    return node, out


def cycle_to_triples(c: Cycle, mint: Optional[Minter] = None) -> tuple[Blank, list[Triple]]:
    mint = mint or blank_minter()
    node = mint()
    every_node = mint()
    out = [
        Triple(node, A, DT.Cycle),
        Triple(node, DT.every, every_node),
        Triple(every_node, A, GRAN_CLASS[c.every]),
    ]
    if c.sample is not None:
        out.append(Triple(node, DT.sample, Literal(c.sample)))
    if c.occurrence is not None:
        onode, triples = interval_to_triples(c.occurrence, mint)
        out.append(Triple(node, DT.exp, onode))
        out += triples
    return node, out


def target_to_triples(target: AnnotationTarget, mint: Optional[Minter] = None) -> tuple[Blank, list[Triple]]:
    mint = mint or blank_minter()
    node = mint()
    if isinstance(target, Resource):
        return node, [Triple(node, A, DT.TemporalThing), Triple(node, RDF.value, target.iri)]
    if isinstance(target, ReifiedTriple):
        return node, [
            Triple(node, RDF.subject, target.subject),
            Triple(node, RDF.predicate, target.predicate),
            Triple(node, RDF.object, target.object),
        ]
    if isinstance(target, NamedGraph):
        return node, [Triple(node, A, DT.Graph), Triple(node, DT.uri, target.iri)]
    raise TypeError(f"not an annotation target: {target!r}")


def period_to_triples(marker: PeriodMarker, mint: Optional[Minter] = None) -> tuple[Blank, list[Triple]]:
    mint = mint or blank_minter()
    node = mint()
    return node, [Triple(node, A, DT.Period), Triple(node, RDF.value, marker.resource)]


def annotation_to_triples(temporal: Union[Interval, Cycle],
                          targets: Iterable[AnnotationTarget] = (),
                          mint: Optional[Minter] = None) -> tuple[Blank, list[Triple]]:
    """Lower a temporal value and hook the annotation targets onto it."""
    mint = mint or blank_minter()
    if isinstance(temporal, Interval):
        root, out = interval_to_triples(temporal, mint)
    else:
        root, out = cycle_to_triples(temporal, mint)
    for target in targets:
        tnode, triples = target_to_triples(target, mint)
        out.append(Triple(root, DT.exp, tnode))
        out += triples
    return root, out


def allen_link_triples(link: AllenLink, mint: Optional[Minter] = None) -> list[Triple]:
    mint = mint or blank_minter()
    right = link.right
    out: list[Triple] = []
    if isinstance(right, PeriodMarker):
        rnode, triples = period_to_triples(right, mint)
        out += triples
        right = rnode
    out.append(Triple(link.left, link.relation.iri, right))
    return out


# ==========================================================================
# Lifting: store nodes -> model values
# ==========================================================================

def _types(store: TripleStore, node: Term) -> list[Iri]:
    return [t for t in store.objects(node, A) if isinstance(t, Iri)]


def _int_prop(store: TripleStore, node: Term, prop: Iri) -> Optional[int]:
    """Integer object of exactly this property; no fallback, because the
    generic ``value`` arcs the schema entailment adds would bleed one
    granule's number into another."""
    for obj in store.objects(node, prop):
        if isinstance(obj, Literal) and isinstance(obj.value, int):
            return obj.value
    return None


def date_from_node(store: TripleStore, node: Term, _depth: int = 0,
                   _seen: tuple = ()) -> Optional[PartialDate]:
    """Lift a date node; reads both the numeric and the month-name
    writing, resolves a period marker one level deep, and returns None
    when the node carries nothing date-like (or is inconsistent).
    Context chains that loop back on themselves lift to None."""
    if node is None or node in _seen:
        return None
    _seen = _seen + (node,)
    if DT.Period in _types(store, node):
        if _depth > 0:
            return None
        target = store.object(node, DT.hasDate)
        if target is None:
            return None
        return date_from_node(store, target, _depth + 1, _seen)
    fields: dict = {}
    for gran, name in ((Granularity.CENTURY, "century"), (Granularity.YEAR, "year"),
                       (Granularity.HOUR, "hour"), (Granularity.MINUTE, "minute"),
                       (Granularity.SECOND, "second")):
        gnode = store.object(node, GRAN_DATE_PROP[gran])
        if gnode is not None:
            value = _int_prop(store, gnode, GRAN_VALUE_PROP[gran])
            if value is not None:
                fields[name] = value
    month_node = store.object(node, GRAN_DATE_PROP[Granularity.MONTH])
    if month_node is not None:
        value = _int_prop(store, month_node, GRAN_VALUE_PROP[Granularity.MONTH])
        if value is None:
            for cls in _types(store, month_node):
                if cls in CLASS_MONTH:
                    value = CLASS_MONTH[cls]
                    break
        if value is not None:
            fields["month"] = value
    day_node = store.object(node, GRAN_DATE_PROP[Granularity.DAY])
    if day_node is not None:
        day_value = _int_prop(store, day_node, DT.day)
        if day_value is not None:
            fields["day_of_month"] = day_value
        week_value = _int_prop(store, day_node, DT.week)
        if week_value is not None:
            fields["week_of_month"] = week_value
        kind: Optional[DayKind] = None
        for cls in _types(store, day_node):
            if cls in CLASS_WEEKDAY:
                kind = CLASS_WEEKDAY[cls]
                break
            if cls in CLASS_GENERIC and kind is None:
                kind = CLASS_GENERIC[cls]
        if kind is None:
            kind = PLAIN_DAY
        fields["day_kind"] = kind
        ctx_node = store.object(day_node, DT.hasContext)
        if ctx_node is not None:
            fields["context"] = date_from_node(store, ctx_node, _depth,
                                               _seen + (day_node,))
    if not fields:
        return None
    try:
        return PartialDate(**fields)
    except TimegraphError:
        return None


def duration_from_node(store: TripleStore, node: Term) -> Optional[Duration]:
    if node is None:
        return None
    granules: dict[Granularity, int] = {}
    for gran in Granularity:
        gnode = store.object(node, GRAN_DATE_PROP[gran])
        if gnode is not None:
            value = _int_prop(store, gnode, DT.value)
            if value is None:
                value = _int_prop(store, gnode, GRAN_VALUE_PROP[gran])
            if value is not None and value > 0:
                granules[gran] = value
    if not granules:
        return None
    try:
        return Duration(granules)
    except TimegraphError:
        return None


def _date_of(store: TripleStore, node: Term, prop: Iri) -> Optional[PartialDate]:
    """First liftable date among a property's objects (a period marker and
    its propagated date can sit side by side)."""
    for candidate in sorted(store.objects(node, prop), key=term_key):
        lifted = date_from_node(store, candidate)
        if lifted is not None:
            return lifted
    return None


def interval_from_node(store: TripleStore, node: Term, _depth: int = 0) -> Optional[Interval]:
    if node is None or _depth > 6:
        return None
    date = _date_of(store, node, DT.hasDate)
    begin = _date_of(store, node, DT.hasBegin)
    end = _date_of(store, node, DT.hasEnd)
    duration = duration_from_node(store, store.object(node, DT.hasDuration))
    inner = None
    for obj in store.objects(node, DT.exp):
        if DT.Cycle in _types(store, obj):
            inner = cycle_from_node(store, obj, _depth + 1)
            if inner is not None:
                break
    if all(v is None for v in (date, begin, end, duration, inner)):
        return None
    try:
        return Interval(date=date, begin=begin, end=end, duration=duration, inner_cycle=inner)
    except TimegraphError:
        return None


def cycle_from_node(store: TripleStore, node: Term, _depth: int = 0) -> Optional[Cycle]:
    if node is None or _depth > 6:
        return None
    every = None
    every_node = store.object(node, DT.every)
    if every_node is not None:
        for cls in _types(store, every_node):
            if cls in CLASS_GRAN:
                every = CLASS_GRAN[cls]
                break
    if every is None:
        return None
    sample = None
    sample_obj = store.object(node, DT.sample)
    if isinstance(sample_obj, Literal) and isinstance(sample_obj.value, int):
        sample = sample_obj.value
    occurrence = None
    for obj in store.objects(node, DT.exp):
        if DT.During in _types(store, obj):
            occurrence = interval_from_node(store, obj, _depth + 1)
            if occurrence is not None:
                break
    try:
        return Cycle(every=every, occurrence=occurrence, sample=sample)
    except TimegraphError:
        return None
