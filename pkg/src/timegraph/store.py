"""In-memory fact base: triples, blank nodes, named graphs, reification,
and a variable-pattern matcher with joins, negation guards, computed
bindings, and bounded-length predicate paths.

The matcher is the substrate both the rule engine and the query layer
build on; it evaluates conjunctions of atoms left to right, extending a
variable binding at each step.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .errors import MalformedTripleError


# ==========================================================================
# Terms
# ==========================================================================

@dataclass(frozen=True)
class Iri:
    value: str

    def __repr__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class Blank:
    id: str

    def __repr__(self) -> str:
        return f"_:{self.id}"


@dataclass(frozen=True)
class Literal:
    """Integer or string literal; nothing else exists in this store."""

    value: Union[int, str]

    def __repr__(self) -> str:
        if isinstance(self.value, int):
            return str(self.value)
        return '"' + self.value + '"'


Term = Union[Iri, Blank, Literal]


@dataclass(frozen=True)
class Var:
    """A named variable, legal in any pattern position."""

    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


def term_key(t: Term) -> tuple:
    """Stable sort key across term kinds."""
    if isinstance(t, Iri):
        return (0, t.value)
    if isinstance(t, Blank):
        return (1, t.id)
    if isinstance(t.value, int):
        return (2, "", t.value)
    return (3, t.value, 0)


class Namespace:
    """Attribute-style IRI factory: ``NS.hasYear`` -> ``Iri(base + "hasYear")``."""

    def __init__(self, base: str):
        self.base = base

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("__"):
            raise AttributeError(name)
        return Iri(self.base + name)

    def term(self, name: str) -> Iri:
        return Iri(self.base + name)

    def __contains__(self, t: Term) -> bool:
        return isinstance(t, Iri) and t.value.startswith(self.base)


# ==========================================================================
# Triples and patterns
# ==========================================================================

@dataclass(frozen=True)
class Triple:
    s: Term
    p: Term
    o: Term
    g: Optional[Iri] = None  # None = default graph

    def key(self) -> tuple:
        gk = ("",) if self.g is None else (self.g.value,)
        return gk + term_key(self.s) + term_key(self.p) + term_key(self.o)


class AnyGraph:
    """Scope marker: match across the default graph and every named graph."""

    _instance: Optional["AnyGraph"] = None

    def __new__(cls) -> "AnyGraph":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ANY_GRAPH"


ANY_GRAPH = AnyGraph()

GraphScope = Union[Iri, Var, None, AnyGraph]

PatternTerm = Union[Term, Var]


@dataclass(frozen=True)
class Pattern:
    """Triple pattern; a pattern with no variables acts as a containment test.

    ``g`` scoping: ANY_GRAPH searches everywhere, None restricts to the
    default graph, an Iri to that named graph, and a Var ranges over the
    named graphs, binding the variable.
    """

    s: PatternTerm
    p: PatternTerm
    o: PatternTerm
    g: GraphScope = ANY_GRAPH


@dataclass(frozen=True)
class NotExists:
    """Guard: succeeds when the sub-conjunction has no match."""

    atoms: tuple


@dataclass(frozen=True)
class PathPlus:
    """One-or-more hops over a single predicate, expanded to a fixed depth."""

    s: PatternTerm
    pred: Iri
    o: PatternTerm
    max_depth: int = 8
    g: GraphScope = ANY_GRAPH


@dataclass(frozen=True)
class Bind:
    """Computed binding: ``fn(binding)`` returns a Term or None to fail."""

    var: str
    fn: Callable[[dict], Optional[Term]]


@dataclass(frozen=True)
class Filter:
    """Boolean guard over the current binding."""

    fn: Callable[[dict], bool]


Atom = Union[Pattern, NotExists, PathPlus, Bind, Filter]

Binding = dict


# ==========================================================================
# Indexes
# ==========================================================================

class _GraphIndex:
    """One graph's triples under SPO / POS / OSP permutation indexes."""

    __slots__ = ("spo", "pos", "osp", "size")

    def __init__(self):
        self.spo: dict = {}
        self.pos: dict = {}
        self.osp: dict = {}
        self.size = 0

    def add(self, s: Term, p: Term, o: Term) -> bool:
        po = self.spo.setdefault(s, {})
        objs = po.setdefault(p, set())
        if o in objs:
            return False
        objs.add(o)
        self.pos.setdefault(p, {}).setdefault(o, set()).add(s)
        self.osp.setdefault(o, {}).setdefault(s, set()).add(p)
        self.size += 1
        return True

    def __len__(self) -> int:
        return self.size

    def contains(self, s: Term, p: Term, o: Term) -> bool:
        return o in self.spo.get(s, {}).get(p, ())

    def iter_match(self, s: Optional[Term], p: Optional[Term],
                   o: Optional[Term]) -> Iterator[tuple]:
        """All (s, p, o) matching the given concrete positions (None = any)."""
        if s is not None:
            po = self.spo.get(s)
            if po is None:
                return
            if p is not None:
                objs = po.get(p)
                if objs is None:
                    return
                if o is not None:
                    if o in objs:
                        yield (s, p, o)
                    return
                for obj in objs:
                    yield (s, p, obj)
                return
            for pred, objs in po.items():
                if o is not None:
                    if o in objs:
                        yield (s, pred, o)
                else:
                    for obj in objs:
                        yield (s, pred, obj)
            return
        if p is not None:
            os_ = self.pos.get(p)
            if os_ is None:
                return
            if o is not None:
                for subj in os_.get(o, ()):
                    yield (subj, p, o)
                return
            for obj, subjects in os_.items():
                for subj in subjects:
                    yield (subj, p, obj)
            return
        if o is not None:
            sp = self.osp.get(o)
            if sp is None:
                return
            for subj, preds in sp.items():
                for pred in preds:
                    yield (subj, pred, o)
            return
        for subj, po in self.spo.items():
            for pred, objs in po.items():
                for obj in objs:
                    yield (subj, pred, obj)


# ==========================================================================
# The store
# ==========================================================================

class TripleStore:
    """Set-semantics triple store with named graphs.

    Mutation (insert, rules) and reads may not overlap; within those
    phases every operation is deterministic.
    """

    def __init__(self):
        self._graphs: dict[Optional[Iri], _GraphIndex] = {None: _GraphIndex()}
        self._blank_counter = 0
        self._statements: dict[tuple, Blank] = {}

    # -- basic mutation ----------------------------------------------------

    def insert(self, t: Triple) -> bool:
        """Add one triple; True when it was not already present."""
        if not isinstance(t.s, (Iri, Blank)):
            raise MalformedTripleError(f"subject must be an IRI or blank node: {t.s!r}")
        if not isinstance(t.p, Iri):
            raise MalformedTripleError(f"predicate must be an IRI: {t.p!r}")
        if not isinstance(t.o, (Iri, Blank, Literal)):
            raise MalformedTripleError(f"object is not a term: {t.o!r}")
        if t.g is not None and not isinstance(t.g, Iri):
            raise MalformedTripleError(f"graph label must be an IRI: {t.g!r}")
        index = self._graphs.get(t.g)
        if index is None:
            index = self._graphs[t.g] = _GraphIndex()
        return index.add(t.s, t.p, t.o)

    def add(self, s: Term, p: Term, o: Term, g: Optional[Iri] = None) -> bool:
        return self.insert(Triple(s, p, o, g))

    def extend(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    def new_blank(self, prefix: str = "b") -> Blank:
        self._blank_counter += 1
        return Blank(f"{prefix}{self._blank_counter}")

    def reify(self, s: Term, p: Term, o: Term) -> Blank:
        """Statement node with subject/predicate/object arcs; idempotent."""
        key = (s, p, o)
        node = self._statements.get(key)
        if node is None:
            digest = hashlib.sha1(repr((term_key(s), term_key(p), term_key(o))).encode()).hexdigest()[:10]
            node = Blank(f"stmt{digest}")
            self._statements[key] = node
            from .vocab import RDF  # local import avoids a cycle
            self.add(node, RDF.subject, s)
            self.add(node, RDF.predicate, p)
            self.add(node, RDF.object, o)
        return node

    # -- reads ---------------------------------------------------------------

    def graphs(self) -> list[Iri]:
        return [g for g in self._graphs if g is not None]

    def graph_count(self, g: Union[Iri, None, AnyGraph] = ANY_GRAPH) -> int:
        """Triples in scope: a named graph, the default graph, or everything."""
        if isinstance(g, AnyGraph):
            return sum(len(ix) for ix in self._graphs.values())
        index = self._graphs.get(g)
        return len(index) if index is not None else 0

    def triples(self, g: Union[Iri, None, AnyGraph] = ANY_GRAPH) -> Iterator[Triple]:
        if isinstance(g, AnyGraph):
            keys = list(self._graphs)
        else:
            keys = [g] if g in self._graphs else []
        for key in keys:
            for s, p, o in self._graphs[key].iter_match(None, None, None):
                yield Triple(s, p, o, key)

    def contains(self, s: Term, p: Term, o: Term,
                 g: Union[Iri, None, AnyGraph] = ANY_GRAPH) -> bool:
        if isinstance(g, AnyGraph):
            return any(ix.contains(s, p, o) for ix in self._graphs.values())
        index = self._graphs.get(g)
        return index.contains(s, p, o) if index is not None else False

    def objects(self, s: Term, p: Iri,
                g: Union[Iri, None, AnyGraph] = ANY_GRAPH) -> list[Term]:
        seen = []
        for _, _, o in self._iter_scoped(s, p, None, g):
            if o not in seen:
                seen.append(o)
        return seen

    def object(self, s: Term, p: Iri,
               g: Union[Iri, None, AnyGraph] = ANY_GRAPH) -> Optional[Term]:
        objs = self.objects(s, p, g)
        if not objs:
            return None
        return min(objs, key=term_key)

    def subjects(self, p: Iri, o: Term,
                 g: Union[Iri, None, AnyGraph] = ANY_GRAPH) -> list[Term]:
        seen = []
        for s, _, _ in self._iter_scoped(None, p, o, g):
            if s not in seen:
                seen.append(s)
        return seen

    def outgoing(self, s: Term,
                 g: Union[Iri, None, AnyGraph] = ANY_GRAPH) -> list[Triple]:
        """Every triple with the given subject, across the scope."""
        return [Triple(s, p, o) for _, p, o in self._iter_scoped(s, None, None, g)]

    def _iter_scoped(self, s, p, o, g) -> Iterator[tuple]:
        if isinstance(g, AnyGraph):
            for index in self._graphs.values():
                yield from index.iter_match(s, p, o)
        else:
            index = self._graphs.get(g)
            if index is not None:
                yield from index.iter_match(s, p, o)

    # -- pattern matching ------------------------------------------------

    def match(self, atoms: Sequence[Atom], binding: Optional[Binding] = None) -> list[Binding]:
        """All bindings satisfying the conjunction, duplicates removed.

        Sound and complete with respect to a scan over the stored triples;
        atoms are evaluated in the order given, so guards should follow
        the patterns that bind their variables.
        """
        results: list[Binding] = []
        self._solve(list(atoms), dict(binding or {}), results, {})
        unique: list[Binding] = []
        seen: set = set()
        for b in results:
            key = frozenset(b.items())
            if key not in seen:
                seen.add(key)
                unique.append(b)
        return unique

    def ask(self, atoms: Sequence[Atom], binding: Optional[Binding] = None) -> bool:
        return bool(self.match(atoms, binding))

    def _solve(self, atoms: list, binding: Binding, out: list, cache: dict) -> None:
        if not atoms:
            out.append(binding)
            return
        atom, rest = atoms[0], atoms[1:]
        if isinstance(atom, Pattern):
            for extended in self._match_pattern(atom, binding):
                self._solve(rest, extended, out, cache)
        elif isinstance(atom, PathPlus):
            for extended in self._match_path(atom, binding, cache):
                self._solve(rest, extended, out, cache)
        elif isinstance(atom, NotExists):
            if not self.match(list(atom.atoms), binding):
                self._solve(rest, binding, out, cache)
        elif isinstance(atom, Bind):
            value = atom.fn(binding)
            if value is None:
                return
            bound = binding.get(atom.var)
            if bound is not None:
                if bound == value:
                    self._solve(rest, binding, out, cache)
                return
            extended = dict(binding)
            extended[atom.var] = value
            self._solve(rest, extended, out, cache)
        elif isinstance(atom, Filter):
            if atom.fn(binding):
                self._solve(rest, binding, out, cache)
        else:
            raise TypeError(f"unknown atom kind: {atom!r}")

    def _resolve(self, t: PatternTerm, binding: Binding) -> Optional[Term]:
        if isinstance(t, Var):
            return binding.get(t.name)
        return t

    def _scope_keys(self, g: GraphScope, binding: Binding) -> list:
        if isinstance(g, AnyGraph):
            return list(self._graphs)
        if isinstance(g, Var):
            bound = binding.get(g.name)
            if bound is not None:
                return [bound] if bound in self._graphs else []
            return [k for k in self._graphs if k is not None]
        return [g] if g in self._graphs else []

    def _match_pattern(self, pat: Pattern, binding: Binding) -> Iterator[Binding]:
        s = self._resolve(pat.s, binding)
        p = self._resolve(pat.p, binding)
        o = self._resolve(pat.o, binding)
        for gkey in self._scope_keys(pat.g, binding):
            for ts, tp, to in self._graphs[gkey].iter_match(s, p, o):
                extended = dict(binding)
                ok = True
                for slot, value in ((pat.s, ts), (pat.p, tp), (pat.o, to)):
                    if isinstance(slot, Var):
                        prior = extended.get(slot.name)
                        if prior is None:
                            extended[slot.name] = value
                        elif prior != value:
                            ok = False
                            break
                if ok and isinstance(pat.g, Var):
                    prior = extended.get(pat.g.name)
                    if prior is None:
                        extended[pat.g.name] = gkey
                    elif prior != gkey:
                        ok = False
                if ok:
                    yield extended

    def _match_path(self, path: PathPlus, binding: Binding,
                    cache: Optional[dict] = None) -> Iterator[Binding]:
        cache = cache if cache is not None else {}
        s = self._resolve(path.s, binding)
        o = self._resolve(path.o, binding)
        if s is not None:
            reached = self._path_reach(s, path, binding, cache, forward=True)
            for node in reached:
                if o is not None:
                    if node == o:
                        yield dict(binding)
                elif isinstance(path.o, Var):
                    extended = dict(binding)
                    extended[path.o.name] = node
                    yield extended
            return
        if o is not None:
            reached = self._path_reach(o, path, binding, cache, forward=False)
            for node in reached:
                if isinstance(path.s, Var):
                    extended = dict(binding)
                    extended[path.s.name] = node
                    yield extended
            return
        # Both ends open: enumerate every subject carrying the predicate.
        starts: list[Term] = []
        for gkey in self._scope_keys(path.g, binding):
            for ts, _, _ in self._graphs[gkey].iter_match(None, path.pred, None):
                if ts not in starts:
                    starts.append(ts)
        for start in starts:
            for node in self._path_reach(start, path, binding, cache, forward=True):
                extended = dict(binding)
                if isinstance(path.s, Var):
                    extended[path.s.name] = start
                if isinstance(path.o, Var):
                    prior = extended.get(path.o.name)
                    if prior is not None and prior != node:
                        continue
                    extended[path.o.name] = node
                yield extended

    def _path_reach(self, origin: Term, path: PathPlus, binding: Binding,
                    cache: dict, forward: bool) -> list[Term]:
        """Nodes reachable from origin over 1..max_depth predicate hops.
        Cached per match() call; the store is frozen while matching."""
        gkeys = tuple(self._scope_keys(path.g, binding))
        key = (origin, path.pred, path.max_depth, gkeys, forward)
        hit = cache.get(key)
        if hit is not None:
            return hit
        seen: set = set()
        order: list[Term] = []
        frontier = [origin]
        for _ in range(path.max_depth):
            nxt: list[Term] = []
            for node in frontier:
                for gkey in gkeys:
                    index = self._graphs[gkey]
                    if forward:
                        found = index.spo.get(node, {}).get(path.pred, ())
                    else:
                        found = index.pos.get(path.pred, {}).get(node, ())
                    for other in found:
                        if other not in seen:
                            seen.add(other)
                            order.append(other)
                            nxt.append(other)
            if not nxt:
                break
            frontier = nxt
        cache[key] = order
        return order


def derived_blank(tag: str, *parts) -> Blank:
    """Deterministic blank node id for rule-derived structures.

    The id depends only on the tag and the key terms, so rule scheduling
    order cannot influence the final store.
    """
    raw = repr((tag,) + tuple(term_key(p) if isinstance(p, (Iri, Blank, Literal)) else p
                              for p in parts))
    return Blank("d" + hashlib.sha1(raw.encode()).hexdigest()[:12])
