"""Vocabulary of the temporal ontology this library implements, plus the
RDFS schema triples (class/property hierarchies and the base granularity
inclusion facts) that the rule engine expects to be loaded.
"""

from __future__ import annotations

from .civil import GenericDay, Granularity, Weekday, MONTH_NAMES
from .store import Iri, Namespace, Triple, TripleStore

RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
DT = Namespace("http://ns.inria.fr/huto/")
DATA = Namespace("http://example.org/data/")

# Default prefix environment used by fixtures and the CLI.
BASE_PREFIXES: dict[str, str] = {
    "": DT.base,
    "rdf": RDF.base,
    "rdfs": RDFS.base,
    "data": DATA.base,
}

A = RDF.type

# -- granularity classes and their date/value properties -------------------

GRAN_CLASS: dict[Granularity, Iri] = {
    Granularity.CENTURY: DT.Century,
    Granularity.YEAR: DT.Year,
    Granularity.MONTH: DT.Month,
    Granularity.WEEK: DT.Week,
    Granularity.DAY: DT.Day,
    Granularity.HOUR: DT.Hour,
    Granularity.MINUTE: DT.Minute,
    Granularity.SECOND: DT.Second,
}
CLASS_GRAN = {v: k for k, v in GRAN_CLASS.items()}

GRAN_DATE_PROP: dict[Granularity, Iri] = {
    Granularity.CENTURY: DT.hasCentury,
    Granularity.YEAR: DT.hasYear,
    Granularity.MONTH: DT.hasMonth,
    Granularity.WEEK: DT.hasWeek,
    Granularity.DAY: DT.hasDay,
    Granularity.HOUR: DT.hasHour,
    Granularity.MINUTE: DT.hasMinute,
    Granularity.SECOND: DT.hasSecond,
}

GRAN_VALUE_PROP: dict[Granularity, Iri] = {
    Granularity.CENTURY: DT.century,
    Granularity.YEAR: DT.year,
    Granularity.MONTH: DT.month,
    Granularity.WEEK: DT.week,
    Granularity.DAY: DT.day,
    Granularity.HOUR: DT.hour,
    Granularity.MINUTE: DT.minute,
    Granularity.SECOND: DT.second,
}

MONTH_CLASS: dict[int, Iri] = {i + 1: DT.term(name) for i, name in enumerate(MONTH_NAMES)}
CLASS_MONTH = {v: k for k, v in MONTH_CLASS.items()}

WEEKDAY_CLASS: dict[Weekday, Iri] = {wd: DT.term(wd.name.capitalize()) for wd in Weekday}
CLASS_WEEKDAY = {v: k for k, v in WEEKDAY_CLASS.items()}

GENERIC_CLASS: dict[GenericDay, Iri] = {gd: DT.term(gd.value) for gd in GenericDay}
CLASS_GENERIC = {v: k for k, v in GENERIC_CLASS.items()}

# -- schema -----------------------------------------------------------------

_SUBCLASS_EDGES: list[tuple[Iri, Iri]] = [
    (DT.Date, DT.Datation),
    (DT.Duration, DT.Datation),
    (DT.Graph, DT.TemporalThing),
    (DT.WeekDay, DT.Day),
    (DT.GenericDay, DT.Day),
]
_SUBCLASS_EDGES += [(cls, DT.TemporalUnit) for cls in GRAN_CLASS.values()]
_SUBCLASS_EDGES += [(cls, DT.WeekDay) for cls in WEEKDAY_CLASS.values()]
_SUBCLASS_EDGES += [(cls, DT.GenericDay) for cls in GENERIC_CLASS.values()]
_SUBCLASS_EDGES += [(cls, DT.Month) for cls in MONTH_CLASS.values()]

_SUBPROPERTY_EDGES: list[tuple[Iri, Iri]] = [
    (DT.hasDate, DT.hasDatation),
    (DT.hasBegin, DT.hasDatation),
    (DT.hasEnd, DT.hasDatation),
    (DT.hasDuration, DT.hasDatation),
]
_SUBPROPERTY_EDGES += [(p, DT.hasTemporalUnit) for p in GRAN_DATE_PROP.values()]
_SUBPROPERTY_EDGES += [(p, DT.value) for p in GRAN_VALUE_PROP.values()]

# The seven immediately-finer edges of the granularity chain, stated as
# included(finer, coarser).
INCLUDED_BASE: list[tuple[Iri, Iri]] = [
    (GRAN_CLASS[fine], GRAN_CLASS[coarse])
    for fine, coarse in zip(list(Granularity)[1:], list(Granularity)[:-1])
]


def schema_triples() -> list[Triple]:
    triples = [Triple(sub, RDFS.subClassOf, sup) for sub, sup in _SUBCLASS_EDGES]
    triples += [Triple(sub, RDFS.subPropertyOf, sup) for sub, sup in _SUBPROPERTY_EDGES]
    triples += [Triple(fine, DT.included, coarse) for fine, coarse in INCLUDED_BASE]
    return triples


def load_schema(store: TripleStore) -> int:
    """Insert the schema into the default graph; returns triples added."""
    return store.extend(schema_triples())
