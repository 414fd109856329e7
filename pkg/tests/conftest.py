from __future__ import annotations

import pytest

import timegraph as tg
from timegraph import fixtures, textio


REFERENCE_TODAY = tg.civil_date(2014, 8, 29)


def build_store(names=None, today=None, normalize=True, skip=()):
    """Fresh store with schema + the named fixtures, optionally normalized."""
    store = tg.TripleStore()
    tg.load_schema(store)
    for name in (names if names is not None else fixtures.clean_fixture_names()):
        textio.insert_document(store, textio.parse_file(fixtures.fixture_path(name)))
    report = None
    if normalize:
        report = tg.run_all(store, today=today or REFERENCE_TODAY, skip=skip)
    return store, report


@pytest.fixture
def corpus_store():
    store, _ = build_store()
    return store


@pytest.fixture
def corpus_engine(corpus_store):
    return tg.QueryEngine(corpus_store, today=REFERENCE_TODAY)
