"""Bundled data files: one per modeled shape (dates in both writings,
deictic dates, durations, recurring intervals, the three annotation
forms, relative dating) plus deliberately inconsistent ones prefixed
``bad_`` for exercising the consistency checks.
"""

from __future__ import annotations

from importlib import resources


def fixture_names() -> list[str]:
    root = resources.files(__package__)
    return sorted(entry.name for entry in root.iterdir()
                  if entry.name.endswith((".ttl", ".trig")))


def clean_fixture_names() -> list[str]:
    return [name for name in fixture_names() if not name.startswith("bad_")]


def fixture_path(name: str) -> str:
    path = resources.files(__package__) / name
    return str(path)


def fixture_text(name: str) -> str:
    return (resources.files(__package__) / name).read_text(encoding="utf-8")
