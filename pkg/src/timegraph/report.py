"""Rendering of engine reports and query results: human tables,
line-delimited machine output, and a figure file for the fixed-point
report.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .rules import ConsistencyViolation, FixedPointReport
from .store import Blank, Iri, Literal, Term
from .vocab import BASE_PREFIXES


def term_text(t: Term, prefixes: Optional[dict[str, str]] = None) -> str:
    """Compact display form for a term, shrinking IRIs via prefixes."""
    if isinstance(t, Iri):
        for prefix, base in sorted((prefixes or BASE_PREFIXES).items(),
                                   key=lambda kv: -len(kv[1])):
            if t.value.startswith(base) and len(t.value) > len(base):
                return f"{prefix}:{t.value[len(base):]}"
        return f"<{t.value}>"
    if isinstance(t, Blank):
        return f"_:{t.id}"
    if isinstance(t, Literal) and isinstance(t.value, int):
        return str(t.value)
    return '"' + str(t.value) + '"'


def term_id(t: Term) -> str:
    """Raw, prefix-free form for machine-readable output."""
    if isinstance(t, Iri):
        return f"<{t.value}>"
    if isinstance(t, Blank):
        return f"_:{t.id}"
    if isinstance(t, Literal) and isinstance(t.value, int):
        return str(t.value)
    return '"' + str(t.value) + '"'


def format_table(headers: list[str], rows: list[list[str]]) -> str:
    if not rows:
        return "(no results)"
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def report_text(report: FixedPointReport, today: Optional[str] = None) -> str:
    lines = []
    if today:
        lines.append(f"today: {today}")
    lines += [
        f"triples before:           {report.triples_before}",
        f"triples after entailment: {report.triples_after_entailment}",
        f"triples after rules:      {report.triples_after}",
        f"rounds to fixed point:    {report.rounds}",
        "rule firings:",
    ]
    for name in sorted(report.per_rule_firings):
        lines.append(f"    {name:<18} {report.per_rule_firings[name]}")
    return "\n".join(lines)


def report_porcelain(report: FixedPointReport, today: Optional[str] = None) -> list[str]:
    lines = []
    if today:
        lines.append(f"today\t{today}")
    lines += [
        f"triples_before\t{report.triples_before}",
        f"triples_entailed\t{report.triples_after_entailment}",
        f"triples_after\t{report.triples_after}",
        f"rounds\t{report.rounds}",
    ]
    for name in sorted(report.per_rule_firings):
        lines.append(f"rule\t{name}\t{report.per_rule_firings[name]}")
    return lines


def violations_text(violations: Iterable[ConsistencyViolation],
                    prefixes: Optional[dict[str, str]] = None) -> str:
    rows = [[v.kind.value, term_text(v.node, prefixes), v.detail] for v in violations]
    if not rows:
        return "no violations"
    return format_table(["kind", "node", "detail"], rows)


def violations_porcelain(violations: Iterable[ConsistencyViolation]) -> list[str]:
    return [f"violation\t{v.kind.value}\t{term_id(v.node)}\t{v.detail}"
            for v in violations]


def save_report_figure(report: FixedPointReport, path: str) -> str:
    """Render the fixed-point report as a bar chart of rule firings,
    annotated with the triple counts, and save it to a file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = sorted(report.per_rule_firings)
    counts = [report.per_rule_firings[n] for n in names]
    fig, ax = plt.subplots(figsize=(8, max(2.5, 0.5 * len(names) + 1.5)))
    positions = range(len(names))
    ax.barh(list(positions), counts, color="#336699")
    ax.set_yticks(list(positions))
    ax.set_yticklabels(names)
    ax.invert_yaxis()
    ax.set_xlabel("triples added")
    ax.set_title(
        f"normalization: {report.triples_before} -> {report.triples_after} triples "
        f"in {report.rounds} round(s)")
    for pos, count in zip(positions, counts):
        ax.text(count, pos, f" {count}", va="center", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
