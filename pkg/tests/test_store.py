import random

import pytest

from timegraph.errors import MalformedTripleError
from timegraph.store import (
    ANY_GRAPH, Blank, Filter, Iri, Literal, NotExists, Pattern, PathPlus,
    Triple, TripleStore, Var,
)
from timegraph.vocab import A, DT, RDF

EX = "http://example.org/"


def iri(name: str) -> Iri:
    return Iri(EX + name)


def test_insert_set_semantics():
    store = TripleStore()
    t = Triple(iri("x"), A, DT.Cycle)
    assert store.insert(t) is True
    assert store.insert(t) is False
    assert store.graph_count() == 1


def test_insert_named_graph_scoping():
    store = TripleStore()
    g = Iri("http://example.org/g/")
    store.insert(Triple(iri("a"), iri("p"), iri("b"), g))
    assert store.contains(iri("a"), iri("p"), iri("b"), g)
    assert store.contains(iri("a"), iri("p"), iri("b"), ANY_GRAPH)
    assert not store.contains(iri("a"), iri("p"), iri("b"), None)
    # The same statement in the default graph counts separately.
    store.insert(Triple(iri("a"), iri("p"), iri("b")))
    assert store.graph_count() == 2
    assert store.graph_count(g) == 1
    assert store.graph_count(None) == 1


@pytest.mark.parametrize("bad", [
    Triple(Literal("abc"), iri("p"), iri("o")),
    Triple(Literal(3), iri("p"), iri("o")),
    Triple(iri("s"), Literal("p"), iri("o")),
    Triple(iri("s"), Blank("b"), iri("o")),
])
def test_insert_rejects_malformed(bad):
    store = TripleStore()
    with pytest.raises(MalformedTripleError):
        store.insert(bad)


def test_graph_count_empty():
    assert TripleStore().graph_count() == 0


def test_match_ground_pattern_is_containment():
    store = TripleStore()
    store.add(iri("x"), A, DT.Cycle)
    assert store.match([Pattern(iri("x"), A, DT.Cycle)]) == [{}]
    assert store.match([Pattern(iri("x"), A, DT.During)]) == []


def test_match_binds_variables():
    store = TripleStore()
    store.add(iri("c1"), A, DT.Cycle)
    store.add(iri("c2"), A, DT.Cycle)
    store.add(iri("d1"), A, DT.During)
    got = {b["x"] for b in store.match([Pattern(Var("x"), A, DT.Cycle)])}
    assert got == {iri("c1"), iri("c2")}


def test_match_join_and_not_exists():
    store = TripleStore()
    for name, unit, sampled in (("c1", DT.Month, False), ("c2", DT.Month, True),
                                ("c3", DT.Year, False)):
        c, u = iri(name), Blank(name + "_u")
        store.add(c, A, DT.Cycle)
        store.add(c, DT.every, u)
        store.add(u, A, unit)
        if sampled:
            store.add(c, DT.sample, Literal(8))
    x, u = Var("x"), Var("u")
    atoms = [Pattern(x, DT.every, u), Pattern(u, A, DT.Month),
             NotExists((Pattern(x, DT.sample, Var("t")),))]
    got = {b["x"] for b in store.match(atoms)}
    assert got == {iri("c1")}


def test_match_graph_variable_ranges_over_named_graphs():
    store = TripleStore()
    g1, g2 = Iri(EX + "g1/"), Iri(EX + "g2/")
    store.add(iri("a"), iri("p"), Literal(1), g1)
    store.add(iri("b"), iri("p"), Literal(2), g2)
    store.add(iri("c"), iri("p"), Literal(3))
    got = {(b["s"], b["g"]) for b in store.match(
        [Pattern(Var("s"), iri("p"), Var("o"), g=Var("g"))])}
    assert got == {(iri("a"), g1), (iri("b"), g2)}


def test_match_filter_and_default_graph_scope():
    store = TripleStore()
    store.add(iri("a"), iri("p"), Literal(5))
    store.add(iri("b"), iri("p"), Literal(50), Iri(EX + "g/"))
    atoms = [Pattern(Var("s"), iri("p"), Var("n"), g=None),
             Filter(lambda b: b["n"].value > 1)]
    assert [b["s"] for b in store.match(atoms)] == [iri("a")]


def test_path_plus_bounded_depth():
    store = TripleStore()
    nodes = [Blank(f"n{i}") for i in range(12)]
    for a, b in zip(nodes, nodes[1:]):
        store.add(a, DT.exp, b)
    reached = {b["x"] for b in store.match(
        [PathPlus(nodes[0], DT.exp, Var("x"), max_depth=8)])}
    assert reached == set(nodes[1:9])
    backward = {b["x"] for b in store.match(
        [PathPlus(Var("x"), DT.exp, nodes[4], max_depth=8)])}
    assert backward == set(nodes[0:4])


def test_reify_idempotent_and_injective():
    store = TripleStore()
    n1 = store.reify(iri("s"), iri("p"), iri("o"))
    before = store.graph_count()
    n2 = store.reify(iri("s"), iri("p"), iri("o"))
    assert n1 == n2
    assert store.graph_count() == before
    n3 = store.reify(iri("s"), iri("p"), iri("o2"))
    assert n3 != n1
    got = store.match([Pattern(n1, RDF.subject, Var("s"))])
    assert got == [{"s": iri("s")}]


def test_match_complete_against_naive_scan():
    rng = random.Random(31)
    terms = [iri(f"r{i}") for i in range(6)] + [Blank(f"b{i}") for i in range(4)]
    preds = [iri(f"p{i}") for i in range(4)]
    literals = [Literal(i) for i in range(3)] + [Literal("s")]
    for trial in range(30):
        store = TripleStore()
        triples = []
        for _ in range(rng.randrange(10, 1000)):
            t = Triple(rng.choice(terms), rng.choice(preds),
                       rng.choice(terms + literals))
            if store.insert(t):
                triples.append(t)
        for _ in range(10):
            s = rng.choice([None, rng.choice(terms)])
            p = rng.choice([None, rng.choice(preds)])
            o = rng.choice([None, rng.choice(terms + literals)])
            pattern = Pattern(s if s is not None else Var("s"),
                              p if p is not None else Var("p"),
                              o if o is not None else Var("o"))
            got = store.match([pattern])
            expected = []
            for t in triples:
                if (s is None or t.s == s) and (p is None or t.p == p) \
                        and (o is None or t.o == o):
                    binding = {}
                    if s is None:
                        binding["s"] = t.s
                    if p is None:
                        binding["p"] = t.p
                    if o is None:
                        binding["o"] = t.o
                    if binding not in expected:
                        expected.append(binding)
            assert sorted(map(repr, got)) == sorted(map(repr, expected))


def test_shared_variable_join_consistency():
    store = TripleStore()
    store.add(iri("x"), iri("loves"), iri("x"))
    store.add(iri("x"), iri("loves"), iri("y"))
    got = [b for b in store.match([Pattern(Var("a"), iri("loves"), Var("a"))])]
    assert got == [{"a": iri("x")}]
