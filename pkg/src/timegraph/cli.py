"""Command-line front end.

Each invocation is one session: it loads the given data files, runs
schema entailment plus the normalization rules (unless told not to),
and then loads, checks, queries, or reports.

Exit codes: 0 success / no violations, 1 violations found, 2 usage or
parse error, 3 engine error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import re
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import report as reporting
from . import rules as rules_mod
from . import textio
from .civil import Granularity, Weekday
from .errors import (
    ParseError, RuleDivergenceError, TimegraphError,
)
from .model import PartialDate, Relation, civil_date
from .query import DateQuery, QueryEngine
from .store import Iri, TripleStore
from .vocab import BASE_PREFIXES, load_schema

_DATE_ARG = re.compile(
    r"^(\d{1,6})-(\d{1,2})-(\d{1,2})"
    r"(?:T(\d{1,2})(?::(\d{1,2})(?::(\d{1,2}))?)?)?$")


def parse_date_arg(text: str) -> PartialDate:
    """ISO-like date argument: YYYY-MM-DD[THH[:MM[:SS]]]."""
    match = _DATE_ARG.match(text)
    if match is None:
        raise TimegraphError(f"cannot read date {text!r}; expected YYYY-MM-DD[THH[:MM[:SS]]]")
    year, month, day = int(match[1]), int(match[2]), int(match[3])
    extra = {}
    if match[4] is not None:
        extra["hour"] = int(match[4])
    if match[5] is not None:
        extra["minute"] = int(match[5])
    if match[6] is not None:
        extra["second"] = int(match[6])
    return civil_date(year, month, day, **extra)


def _today_iso(today: PartialDate) -> str:
    return f"{today.year:04d}-{today.month:02d}-{today.day_of_month:02d}"


@dataclass
class Session:
    store: TripleStore
    prefixes: dict[str, str] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)
    file_counts: list[int] = field(default_factory=list)
    normalized: bool = False
    today: Optional[PartialDate] = None
    today_source: str = "system"
    last_report: Optional[rules_mod.FixedPointReport] = None


def build_session(paths: Sequence[str], today_arg: Optional[str]) -> Session:
    store = TripleStore()
    load_schema(store)
    session = Session(store=store, prefixes=dict(BASE_PREFIXES))
    if today_arg:
        session.today = parse_date_arg(today_arg)
        session.today_source = "given"
    else:
        now = _dt.date.today()
        session.today = civil_date(now.year, now.month, now.day)
    for path in paths:
        try:
            doc = textio.parse_file(path)
        except FileNotFoundError:
            raise TimegraphError(f"cannot read {path}: no such file")
        except ParseError as exc:
            raise ParseError(f"{path}: {exc.args[0]}", exc.line, exc.col)
        added = textio.insert_document(store, doc)
        session.prefixes.update(doc.prefixes)
        session.files.append(path)
        session.file_counts.append(added)
    return session


def normalize_session(session: Session, args) -> rules_mod.FixedPointReport:
    report = rules_mod.run_all(
        session.store,
        today=session.today,
        skip=tuple(args.skip_rule or ()),
        max_rounds=args.max_rounds,
    )
    session.normalized = True
    session.last_report = report
    return report


def resolve_resource(session: Session, text: str) -> Iri:
    if text.startswith("<") and text.endswith(">"):
        return Iri(text[1:-1])
    if "://" in text:
        return Iri(text)
    if ":" in text:
        prefix, local = text.split(":", 1)
        base = session.prefixes.get(prefix)
        if base is None:
            raise TimegraphError(f"unknown prefix {prefix!r} in {text!r}")
        return Iri(base + local)
    raise TimegraphError(f"cannot resolve resource {text!r}; use a prefixed name or full IRI")


# ==========================================================================
# Commands
# ==========================================================================

def cmd_load(args) -> int:
    session = build_session(args.files, args.today)
    if args.porcelain:
        for path, count in zip(session.files, session.file_counts):
            print(f"file\t{path}\t{count}")
        print(f"triples_total\t{session.store.graph_count()}")
    else:
        for path, count in zip(session.files, session.file_counts):
            print(f"loaded {path}: {count} triples")
        print(f"store holds {session.store.graph_count()} triples (including schema)")
    return 0


def cmd_normalize(args) -> int:
    session = build_session(args.files, args.today)
    report = normalize_session(session, args)
    today_text = _today_iso(session.today)
    if args.porcelain:
        for line in reporting.report_porcelain(report, today=today_text):
            print(line)
    else:
        print(reporting.report_text(report, today=f"{today_text} ({session.today_source})"))
    if args.figure:
        reporting.save_report_figure(report, args.figure)
        print(f"figure\t{args.figure}" if args.porcelain else f"figure written: {args.figure}")
    return 0


def cmd_check(args) -> int:
    session = build_session(args.files, args.today)
    if not args.no_normalize:
        normalize_session(session, args)
    violations = rules_mod.run_checks(session.store)
    if args.porcelain:
        for line in reporting.violations_porcelain(violations):
            print(line)
    else:
        print(f"today: {_today_iso(session.today)} ({session.today_source})")
        print(reporting.violations_text(violations, session.prefixes))
    return 1 if violations else 0


def cmd_query(args) -> int:
    session = build_session(args.data or [], args.today)
    if not args.no_normalize:
        normalize_session(session, args)
    engine = QueryEngine(session.store, today=session.today, horizon=args.horizon)
    prefixes = session.prefixes
    porcelain = args.porcelain
    if not porcelain:
        print(f"today: {_today_iso(session.today)} ({session.today_source})")

    if args.family == "temporality":
        resource = resolve_resource(session, args.resource)
        descriptions = engine.temporality_of(resource)
        if porcelain:
            for desc in descriptions:
                print(f"root\t{reporting.term_id(desc.root)}")
                for t in sorted(desc.closure, key=lambda t: t.key()):
                    print(f"triple\t{reporting.term_id(t.s)}"
                          f"\t{reporting.term_id(t.p)}"
                          f"\t{reporting.term_id(t.o)}")
        elif not descriptions:
            print("(no temporality)")
        else:
            for desc in descriptions:
                print(f"temporality root: {reporting.term_text(desc.root, prefixes)}")
                for t in sorted(desc.closure, key=lambda t: t.key()):
                    print(f"    {reporting.term_text(t.s, prefixes)} "
                          f"{reporting.term_text(t.p, prefixes)} "
                          f"{reporting.term_text(t.o, prefixes)}")
        return 0

    if args.family == "recurring":
        if args.weekday:
            freq = Weekday[args.weekday.upper()]
        else:
            freq = Granularity[args.every.upper()]
        pairs = engine.recurring_resources(freq)
        if porcelain:
            for resource, desc in pairs:
                print(f"resource\t{reporting.term_id(resource)}"
                      f"\t{reporting.term_id(desc.root)}")
        else:
            rows = [[reporting.term_text(r, prefixes), reporting.term_text(d.root, prefixes)]
                    for r, d in pairs]
            print(reporting.format_table(["resource", "cycle"], rows))
        return 0

    if args.family == "relative":
        resource = resolve_resource(session, args.resource)
        relation = Relation.BEFORE if args.relation == "before" else Relation.AFTER
        resources = engine.relative_resources(resource, relation)
        if porcelain:
            for r in resources:
                print(f"resource\t{reporting.term_id(r)}")
        else:
            print(reporting.format_table(
                ["resource"], [[reporting.term_text(r, prefixes)] for r in resources]))
        return 0

    if args.family == "on-date":
        date = parse_date_arg(args.date)
        dq = DateQuery(year=date.year, month=date.month, day=date.day_of_month)
        pairs = engine.resources_on(dq)
        if porcelain:
            for resource, kind in pairs:
                print(f"resource\t{reporting.term_id(resource)}\t{kind}")
        else:
            print(f"weekday: {dq.weekday.name.capitalize()}")
            rows = [[reporting.term_text(r, prefixes), kind] for r, kind in pairs]
            print(reporting.format_table(["resource", "match"], rows))
        return 0

    if args.family == "in-range":
        begin = parse_date_arg(args.begin)
        end = parse_date_arg(args.end)
        resources = engine.resources_in_range(begin, end, horizon=args.horizon)
        if porcelain:
            for r in resources:
                print(f"resource\t{reporting.term_id(r)}")
        else:
            print(reporting.format_table(
                ["resource"], [[reporting.term_text(r, prefixes)] for r in resources]))
        return 0

    raise TimegraphError(f"unknown query family {args.family!r}")


# ==========================================================================
# Argument parsing
# ==========================================================================

def _add_common(parser: argparse.ArgumentParser, *, normalizing: bool):
    parser.add_argument("--today", metavar="DATE",
                        help="reference date for deictic data (YYYY-MM-DD); default: system date")
    parser.add_argument("--porcelain", action="store_true",
                        help="line-delimited, tab-separated, order-stable output")
    if normalizing:
        parser.add_argument("--skip-rule", action="append", metavar="NAME",
                            help="skip a rule group (repeatable); names: "
                                 + ", ".join(rules_mod.GROUP_ORDER))
        parser.add_argument("--max-rounds", type=int, default=64,
                            help="fixed-point round limit (default 64)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timegraph",
        description="Temporal knowledge base: load data, normalize, check consistency, query.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_load = sub.add_parser("load", help="parse files and report triple counts")
    p_load.add_argument("files", nargs="+", metavar="FILE")
    _add_common(p_load, normalizing=False)
    p_load.set_defaults(func=cmd_load)

    p_norm = sub.add_parser("normalize", help="run entailment and rules, print the report")
    p_norm.add_argument("files", nargs="*", metavar="FILE")
    _add_common(p_norm, normalizing=True)
    p_norm.add_argument("--figure", metavar="PATH",
                        help="also render the report as a chart saved to PATH")
    p_norm.set_defaults(func=cmd_normalize)

    p_check = sub.add_parser("check", help="report consistency violations (exit 1 if any)")
    p_check.add_argument("files", nargs="*", metavar="FILE")
    _add_common(p_check, normalizing=True)
    p_check.add_argument("--no-normalize", action="store_true",
                         help="check the data as loaded, without running the rules")
    p_check.set_defaults(func=cmd_check)

    p_query = sub.add_parser("query", help="run one of the temporal query families")
    q_sub = p_query.add_subparsers(dest="family", required=True)

    def q_common(qp):
        qp.add_argument("-d", "--data", action="append", metavar="FILE",
                        help="data file to load (repeatable)")
        _add_common(qp, normalizing=True)
        qp.add_argument("--no-normalize", action="store_true",
                        help="query the data as loaded, without running the rules")
        qp.add_argument("--horizon", type=int, default=3700,
                        help="day-enumeration bound for range queries (default 3700)")
        qp.set_defaults(func=cmd_query)

    q_temp = q_sub.add_parser("temporality", help="every temporality of a resource")
    q_temp.add_argument("resource")
    q_common(q_temp)

    q_rec = q_sub.add_parser("recurring", help="resources repeating at a frequency")
    freq = q_rec.add_mutually_exclusive_group(required=True)
    freq.add_argument("--every", choices=[g.name.lower() for g in Granularity])
    freq.add_argument("--weekday", choices=[w.name.lower() for w in Weekday])
    q_common(q_rec)

    q_rel = q_sub.add_parser("relative", help="resources before/after a resource")
    q_rel.add_argument("resource")
    q_rel.add_argument("relation", choices=["before", "after"])
    q_common(q_rel)

    q_on = q_sub.add_parser("on-date", help="resources occurring on a date")
    q_on.add_argument("date", help="YYYY-MM-DD (weekday is computed)")
    q_common(q_on)

    q_range = q_sub.add_parser("in-range", help="resources occurring inside a day range")
    q_range.add_argument("begin", help="YYYY-MM-DD")
    q_range.add_argument("end", help="YYYY-MM-DD")
    q_common(q_range)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuleDivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TimegraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
