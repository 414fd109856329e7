"""Forward-chaining rule engine: normalization, inference, schema
entailment, and consistency checking over a store, run to a fixed point.

Rules are native objects evaluated by the store's matcher; every rule
only adds triples, so the engine is monotone and terminates on the
finite base (arithmetic in heads is delegated to the model's calendar
operations, which keeps firing bounded). Derived blank nodes get
deterministic ids, so the final store does not depend on scheduling
order. Derived triples land in the default graph.

Consistency violations are reported by separate check functions and are
never auto-repaired.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

from .civil import Granularity, weekday_of
from .errors import MalformedTripleError, RuleDivergenceError, TimegraphError
from .model import (
    add_duration, date_from_node, date_to_triples, duration_from_node,
    resolve_deictic, PartialDate,
)
from .store import (
    ANY_GRAPH, Binding, Blank, Iri, Literal, NotExists, Pattern, PathPlus,
    Filter, Term, Triple, TripleStore, Var, derived_blank, term_key,
)
from .vocab import (
    A, CLASS_GRAN, CLASS_MONTH, CLASS_WEEKDAY, DT, GRAN_CLASS,
    GRAN_DATE_PROP, MONTH_CLASS, RDF, RDFS,
)

HeadFn = Callable[[TripleStore, Binding], Iterable[Triple]]


@dataclass(frozen=True)
class Rule:
    name: str
    body: tuple
    head: HeadFn


@dataclass
class RuleGroup:
    """A named family of rules toggled and reported as one unit."""

    name: str
    rules: list[Rule] = field(default_factory=list)


@dataclass
class FixedPointReport:
    rounds: int
    triples_before: int
    triples_after_entailment: int
    triples_after: int
    per_rule_firings: dict[str, int]


class ViolationKind(Enum):
    CYCLE_GRANULARITY = "CycleGranularity"
    DURING_ENCLOSURE = "DuringEnclosure"
    WEEKDAY_MISMATCH = "WeekdayMismatch"
    MONTH_RANGE = "MonthRange"
    ALLEN_CYCLE = "AllenCycle"
    DURATION_UNDERSPECIFIED = "DurationUnderspecified"


@dataclass(frozen=True)
class ConsistencyViolation:
    node: Term
    kind: ViolationKind
    detail: str


# ==========================================================================
# Rule construction helpers
# ==========================================================================

def _subst(template, binding: Binding) -> Term:
    if isinstance(template, Var):
        return binding[template.name]
    return template


def templates(*triples) -> HeadFn:
    """Head that instantiates fixed triple templates with the binding."""

    def head(store: TripleStore, binding: Binding) -> list[Triple]:
        return [Triple(_subst(s, binding), _subst(p, binding), _subst(o, binding))
                for s, p, o in triples]

    return head


def _int_of(binding: Binding, name: str) -> Optional[int]:
    value = binding.get(name)
    if isinstance(value, Literal) and isinstance(value.value, int):
        return value.value
    return None


# ==========================================================================
# Rule groups
# ==========================================================================

def _rdfs_group() -> RuleGroup:
    x, y, a, b, c, p, q = (Var(n) for n in "xyabcpq")
    group = RuleGroup("rdfs")
    group.rules.append(Rule(
        "subclass_transitivity",
        (Pattern(a, RDFS.subClassOf, b), Pattern(b, RDFS.subClassOf, c)),
        templates((a, RDFS.subClassOf, c))))
    group.rules.append(Rule(
        "subproperty_transitivity",
        (Pattern(a, RDFS.subPropertyOf, b), Pattern(b, RDFS.subPropertyOf, c)),
        templates((a, RDFS.subPropertyOf, c))))
    group.rules.append(Rule(
        "type_propagation",
        (Pattern(a, RDFS.subClassOf, b), Pattern(x, A, a)),
        templates((x, A, b))))
    group.rules.append(Rule(
        "property_propagation",
        (Pattern(p, RDFS.subPropertyOf, q), Pattern(x, p, y)),
        templates((x, q, y))))
    return group


def _month_names_group() -> RuleGroup:
    group = RuleGroup("month_names")
    m = Var("m")
    for number, cls in MONTH_CLASS.items():
        group.rules.append(Rule(
            f"month_name_to_number_{number}",
            (Pattern(m, A, cls),),
            templates((m, DT.month, Literal(number)))))
        group.rules.append(Rule(
            f"month_number_to_name_{number}",
            (Pattern(m, DT.month, Literal(number)),),
            templates((m, A, cls))))
    return group


def _leap_years_group() -> RuleGroup:
    group = RuleGroup("leap_years")
    y, n = Var("y"), Var("n")

    def year_value(binding: Binding) -> Optional[int]:
        return _int_of(binding, "n")

    def leap_mod4(binding: Binding) -> bool:
        value = year_value(binding)
        return value is not None and value >= 1 and value % 4 == 0 and value % 100 != 0

    def leap_mod400(binding: Binding) -> bool:
        value = year_value(binding)
        return value is not None and value >= 1 and value % 400 == 0

    def common(binding: Binding) -> bool:
        value = year_value(binding)
        return (value is not None and value >= 1
                and not (value % 4 == 0 and (value % 100 != 0 or value % 400 == 0)))

    leap_head = templates((y, A, DT.LeapYear), (y, DT.days, Literal(366)))
    group.rules.append(Rule(
        "leap_mod_4_not_100",
        (Pattern(y, DT.year, n), Filter(leap_mod4)),
        leap_head))
    group.rules.append(Rule(
        "leap_mod_400",
        (Pattern(y, DT.year, n), Filter(leap_mod400)),
        leap_head))
    group.rules.append(Rule(
        "common_year",
        (Pattern(y, DT.year, n), Filter(common)),
        templates((y, A, DT.CommonYear), (y, DT.days, Literal(365)))))
    return group


def _period_dates_group(path_depth: int) -> RuleGroup:
    group = RuleGroup("period_dates")
    p, r, th, t, d, u = (Var(n) for n in ("p", "r", "th", "t", "d", "u"))
    group.rules.append(Rule(
        "period_marker_resolution",
        (Pattern(p, A, DT.Period),
         Pattern(p, RDF.value, r),
         Pattern(th, RDF.value, r),
         Filter(lambda b: b["th"] != b["p"]),
         PathPlus(t, DT.exp, th, max_depth=path_depth),
         Pattern(t, A, DT.During),
         Pattern(t, DT.hasDate, d)),
        templates((p, DT.hasDate, d))))
    group.rules.append(Rule(
        "period_date_to_user",
        (Pattern(u, DT.hasDate, p),
         Pattern(p, A, DT.Period),
         Pattern(p, DT.hasDate, d),
         Filter(lambda b: b["d"] != b["p"] and b["d"] != b["u"])),
        templates((u, DT.hasDate, d))))
    return group


def _duration_end_group(today: Optional[PartialDate]) -> RuleGroup:
    group = RuleGroup("duration_end")
    x, b, dn = Var("x"), Var("b"), Var("dn")

    def head(store: TripleStore, binding: Binding) -> list[Triple]:
        interval = binding["x"]
        begin = date_from_node(store, binding["b"])
        duration = duration_from_node(store, binding["dn"])
        if begin is None or duration is None:
            return []
        if begin.is_deictic and begin.context is None:
            if today is None:
                return []
            try:
                begin = resolve_deictic(begin, today)
            except TimegraphError:
                return []
        try:
            end = add_duration(begin, duration)
        except TimegraphError:
            return []
        counter = [0]

        def mint() -> Blank:
            counter[0] += 1
            return derived_blank("duration_end", interval, counter[0])

        node, triples = date_to_triples(end, mint)
        return triples + [Triple(interval, DT.hasEnd, node)]

    group.rules.append(Rule(
        "end_from_begin_and_duration",
        (Pattern(x, DT.hasBegin, b),
         Pattern(x, DT.hasDuration, dn),
         NotExists((Pattern(x, DT.hasEnd, Var("e")),))),
        head))
    return group


# How an annotation thing points at the resource it stands for.
ANNOTATION_ACCESSORS = (RDF.value, RDF.subject, RDF.object)


def _allen_closure_group(path_depth: int) -> RuleGroup:
    group = RuleGroup("allen_closure")
    a, b, c = Var("a"), Var("b"), Var("c")
    p, r, t, th = Var("p"), Var("r"), Var("t"), Var("th")
    pairs = ((DT.before, DT.after), (DT.after, DT.before))
    for rel, inv in pairs:
        tag = "before" if rel == DT.before else "after"
        group.rules.append(Rule(
            f"{tag}_inverse",
            (Pattern(a, rel, b),),
            templates((b, inv, a))))
        group.rules.append(Rule(
            f"{tag}_transitivity",
            (Pattern(a, rel, b), Pattern(b, rel, c)),
            templates((a, rel, c))))
        group.rules.append(Rule(
            f"{tag}_period_unwrap",
            (Pattern(a, rel, p), Pattern(p, A, DT.Period), Pattern(p, RDF.value, r)),
            templates((a, rel, r))))
        for acc in ANNOTATION_ACCESSORS:
            ann = (Pattern(th, acc, r),
                   PathPlus(t, DT.exp, th, max_depth=path_depth),
                   Pattern(t, A, DT.During))
            group.rules.append(Rule(
                f"{tag}_to_interval_left",
                (Pattern(r, rel, b),) + ann,
                templates((t, rel, b))))
            group.rules.append(Rule(
                f"{tag}_to_interval_right",
                (Pattern(a, rel, r),) + ann,
                templates((a, rel, t))))
            group.rules.append(Rule(
                f"{tag}_to_resource_left",
                (Pattern(t, rel, b),) + ann,
                templates((r, rel, b))))
            group.rules.append(Rule(
                f"{tag}_to_resource_right",
                (Pattern(a, rel, t),) + ann,
                templates((a, rel, r))))
    return group


def _included_closure_group() -> RuleGroup:
    group = RuleGroup("included_closure")
    a, b, c = Var("a"), Var("b"), Var("c")
    group.rules.append(Rule(
        "included_transitivity",
        (Pattern(a, DT.included, b), Pattern(b, DT.included, c)),
        templates((a, DT.included, c))))
    group.rules.append(Rule(
        "included_by_subclass",
        (Pattern(b, DT.included, c), Pattern(a, RDFS.subClassOf, b)),
        templates((a, DT.included, c))))
    return group


GROUP_ORDER = ("rdfs", "month_names", "leap_years", "period_dates",
               "duration_end", "allen_closure", "included_closure")


def build_rule_groups(today: Optional[PartialDate] = None,
                      path_depth: int = 8) -> list[RuleGroup]:
    return [
        _rdfs_group(),
        _month_names_group(),
        _leap_years_group(),
        _period_dates_group(path_depth),
        _duration_end_group(today),
        _allen_closure_group(path_depth),
        _included_closure_group(),
    ]


# ==========================================================================
# The fixed-point driver
# ==========================================================================

def apply_group(store: TripleStore, group: RuleGroup) -> int:
    """One pass over a group's rules; returns triples actually added."""
    added = 0
    for rule in group.rules:
        produced: list[Triple] = []
        for binding in store.match(rule.body):
            produced.extend(rule.head(store, binding))
        for triple in produced:
            try:
                if store.insert(triple):
                    added += 1
            except MalformedTripleError:
                continue
    return added


def run_all(store: TripleStore,
            groups: Optional[Sequence[RuleGroup]] = None,
            *,
            today: Optional[PartialDate] = None,
            skip: Sequence[str] = (),
            max_rounds: int = 64,
            path_depth: int = 8) -> FixedPointReport:
    """Run schema entailment first, then all groups round-robin until a
    full round fires nothing. The schema must already be loaded.
    """
    if groups is None:
        groups = build_rule_groups(today=today, path_depth=path_depth)
    active = [g for g in groups if g.name not in set(skip)]
    unknown = set(skip) - {g.name for g in groups}
    if unknown:
        raise TimegraphError(f"unknown rule group(s): {', '.join(sorted(unknown))}")
    firings = {g.name: 0 for g in active}
    before = store.graph_count(ANY_GRAPH)

    entail_groups = [g for g in active if g.name == "rdfs"]
    for group in entail_groups:
        for _ in range(max_rounds):
            added = apply_group(store, group)
            firings[group.name] += added
            if not added:
                break
        else:
            raise RuleDivergenceError(f"entailment did not settle in {max_rounds} rounds")
    after_entailment = store.graph_count(ANY_GRAPH)

    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise RuleDivergenceError(f"no fixed point after {max_rounds} rounds")
        added_this_round = 0
        for group in active:
            added = apply_group(store, group)
            firings[group.name] += added
            added_this_round += added
        if added_this_round == 0:
            break
    return FixedPointReport(
        rounds=rounds,
        triples_before=before,
        triples_after_entailment=after_entailment,
        triples_after=store.graph_count(ANY_GRAPH),
        per_rule_firings=firings,
    )


# ==========================================================================
# Consistency checks (report, never repair)
# ==========================================================================

def _node_finest_class(store: TripleStore, node: Term) -> Optional[Granularity]:
    """Finest granularity over a temporal node's date, begin and end."""
    finest: Optional[Granularity] = None
    for prop in (DT.hasDate, DT.hasBegin, DT.hasEnd):
        for target in store.objects(node, prop):
            lifted = date_from_node(store, target)
            if lifted is None:
                continue
            gran = lifted.finest()
            if finest is None or gran.is_finer_than(finest):
                finest = gran
    return finest


def _every_granularity(store: TripleStore, cycle: Term) -> Optional[Granularity]:
    every = store.object(cycle, DT.every)
    if every is None:
        return None
    for cls in store.objects(every, A):
        if cls in CLASS_GRAN:
            return CLASS_GRAN[cls]
    return None


def _strictly_coarser(store: TripleStore, coarse: Granularity, fine: Granularity) -> bool:
    """True when included(fine, coarse) is in the store's closure."""
    return store.contains(GRAN_CLASS[fine], DT.included, GRAN_CLASS[coarse])


def check_cycle_consistency(store: TripleStore) -> list[ConsistencyViolation]:
    """Granularity ordering between cycles and their intervals, plus
    weekday agreement on fully specified dates. Requires the included
    closure (run the rules first)."""
    violations: list[ConsistencyViolation] = []
    c, d = Var("c"), Var("d")
    for binding in store.match([Pattern(c, A, DT.Cycle)]):
        cycle = binding["c"]
        every = _every_granularity(store, cycle)
        if every is None:
            continue
        for occ in store.objects(cycle, DT.exp):
            if DT.During not in store.objects(occ, A):
                continue
            finest = _node_finest_class(store, occ)
            if finest is None:
                continue
            if not _strictly_coarser(store, every, finest):
                violations.append(ConsistencyViolation(
                    cycle, ViolationKind.CYCLE_GRANULARITY,
                    f"repeat unit {every.name} is not strictly coarser than "
                    f"the occurrence's {finest.name} granularity"))
    for binding in store.match([Pattern(d, A, DT.During), Pattern(d, DT.exp, c),
                                Pattern(c, A, DT.Cycle)]):
        during, cycle = binding["d"], binding["c"]
        every = _every_granularity(store, cycle)
        finest = _node_finest_class(store, during)
        if every is None or finest is None:
            continue
        if not _strictly_coarser(store, finest, every):
            violations.append(ConsistencyViolation(
                during, ViolationKind.DURING_ENCLOSURE,
                f"enclosing interval at {finest.name} granularity must be "
                f"strictly coarser than the inner cycle's {every.name} unit"))
    violations.extend(check_weekdays(store))
    return _sorted_violations(violations)


def check_weekdays(store: TripleStore) -> list[ConsistencyViolation]:
    violations = []
    dn, day = Var("dn"), Var("day")
    for binding in store.match([Pattern(dn, GRAN_DATE_PROP[Granularity.DAY], day)]):
        date_node, day_node = binding["dn"], binding["day"]
        stated = None
        for cls in store.objects(day_node, A):
            if cls in CLASS_WEEKDAY:
                stated = CLASS_WEEKDAY[cls]
                break
        if stated is None:
            continue
        dom = _int_object(store, day_node, DT.day)
        month = _month_number(store, date_node)
        year = None
        year_node = store.object(date_node, GRAN_DATE_PROP[Granularity.YEAR])
        if year_node is not None:
            year = _int_object(store, year_node, DT.year)
        if None in (dom, month, year):
            continue
        try:
            actual = weekday_of(year, month, dom)
        except TimegraphError:
            continue
        if actual != stated:
            violations.append(ConsistencyViolation(
                date_node, ViolationKind.WEEKDAY_MISMATCH,
                f"{year}-{month:02d}-{dom:02d} is a {actual.name.capitalize()}, "
                f"stated {stated.name.capitalize()}"))
    return violations


def _int_object(store: TripleStore, node: Term, prop: Iri) -> Optional[int]:
    obj = store.object(node, prop)
    if isinstance(obj, Literal) and isinstance(obj.value, int):
        return obj.value
    return None


def _month_number(store: TripleStore, date_node: Term) -> Optional[int]:
    month_node = store.object(date_node, GRAN_DATE_PROP[Granularity.MONTH])
    if month_node is None:
        return None
    value = _int_object(store, month_node, DT.month)
    if value is not None:
        return value
    for cls in store.objects(month_node, A):
        if cls in CLASS_MONTH:
            return CLASS_MONTH[cls]
    return None


def check_month_ranges(store: TripleStore) -> list[ConsistencyViolation]:
    violations = []
    m, n = Var("m"), Var("n")
    for binding in store.match([Pattern(m, DT.month, n)]):
        value = binding["n"]
        if isinstance(value, Literal) and isinstance(value.value, int):
            if not 1 <= value.value <= 12:
                violations.append(ConsistencyViolation(
                    binding["m"], ViolationKind.MONTH_RANGE,
                    f"month value {value.value} outside 1..12"))
    return _sorted_violations(violations)


def check_allen_cycles(store: TripleStore) -> list[ConsistencyViolation]:
    """An ordering loop shows up as a reflexive before/after arc once the
    closure has been computed."""
    violations = []
    x = Var("x")
    for rel, name in ((DT.before, "before"), (DT.after, "after")):
        for binding in store.match([Pattern(x, rel, x)]):
            violations.append(ConsistencyViolation(
                binding["x"], ViolationKind.ALLEN_CYCLE,
                f"{name} loop: the node precedes itself"))
    return _sorted_violations(violations)


def check_duration_ends(store: TripleStore) -> list[ConsistencyViolation]:
    """Intervals whose end could not be derived from begin + duration."""
    violations = []
    x, b, dn = Var("x"), Var("b"), Var("dn")
    atoms = [Pattern(x, DT.hasBegin, b), Pattern(x, DT.hasDuration, dn),
             NotExists((Pattern(x, DT.hasEnd, Var("e")),))]
    for binding in store.match(atoms):
        violations.append(ConsistencyViolation(
            binding["x"], ViolationKind.DURATION_UNDERSPECIFIED,
            "begin + duration present but no end date was derivable"))
    return _sorted_violations(violations)


def run_checks(store: TripleStore) -> list[ConsistencyViolation]:
    """Every consistency check, in a stable order."""
    violations = []
    violations += check_cycle_consistency(store)
    violations += check_month_ranges(store)
    violations += check_allen_cycles(store)
    violations += check_duration_ends(store)
    return _sorted_violations(violations)


def _sorted_violations(violations: list[ConsistencyViolation]) -> list[ConsistencyViolation]:
    unique = list(dict.fromkeys(violations))
    unique.sort(key=lambda v: (v.kind.value, term_key(v.node), v.detail))
    return unique
