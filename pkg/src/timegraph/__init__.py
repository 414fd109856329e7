"""timegraph: a temporal knowledge library.

Facts live in an RDF-style triple store and carry human temporal
annotations (calendar dates, durations, closed and open-ended intervals,
recurring intervals, deictic dates, relative dating through period
markers). A forward-chaining rule engine normalizes and enriches the
store to a fixed point, and a query layer answers the temporal question
families over the result.
"""

from .civil import (
    GenericDay, Granularity, PLAIN_DAY, Weekday, granularity_compare,
    is_leap_year, weekday_of,
)
from .errors import TimegraphError
from .model import (
    AllenLink, Cycle, Duration, Interval, NamedGraph, PartialDate,
    PeriodMarker, ReifiedTriple, Relation, Resource, add_duration,
    civil_date, days_in, finest_granularity, resolve_deictic,
)
from .query import DateQuery, QueryEngine, TemporalityDescription
from .rules import (
    ConsistencyViolation, FixedPointReport, ViolationKind, build_rule_groups,
    run_all, run_checks,
)
from .store import (
    ANY_GRAPH, Blank, Iri, Literal, Pattern, PathPlus, NotExists, Term,
    Triple, TripleStore, Var,
)
from .textio import Document, insert_document, isomorphic, parse, parse_file, serialize
from .vocab import DT, DATA, RDF, RDFS, load_schema

__version__ = "0.1.0"

__all__ = [
    "ANY_GRAPH", "AllenLink", "Blank", "ConsistencyViolation", "Cycle",
    "DATA", "DT", "DateQuery", "Document", "Duration", "FixedPointReport",
    "GenericDay", "Granularity", "Interval", "Iri", "Literal", "NamedGraph",
    "NotExists", "PLAIN_DAY", "PartialDate", "Pattern", "PathPlus",
    "PeriodMarker", "QueryEngine", "RDF", "RDFS", "ReifiedTriple",
    "Relation", "Resource", "TemporalityDescription", "Term", "Weekday",
    "TimegraphError", "Triple", "TripleStore", "Var", "ViolationKind",
    "add_duration", "build_rule_groups", "civil_date", "days_in",
    "finest_granularity", "granularity_compare", "insert_document",
    "is_leap_year", "isomorphic", "load_schema", "parse", "parse_file",
    "resolve_deictic", "run_all", "run_checks", "serialize", "weekday_of",
]
