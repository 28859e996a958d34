"""Reproduction report bundle and rendering.

A ReportBundle collects the outputs of the other modules (taxonomy
validation, pipeline audit, corpus statistics, reliability values, coverage,
rankings and rank-sum tests) and renders them deterministically as canonical
JSON, markdown, or aligned text whose layouts mirror the published summary
tables.  Every section is either present or explicitly marked skipped with a
reason, and input digests make byte-identical reruns detectable.

Formatting rules are fixed: percentages with 2 decimals, reliability
coefficients with 3, p-values truncated at "<0.001" in rendered tables while
machine output keeps full precision.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

SECTIONS = ("taxonomy_validation", "pipeline_audit", "corpus_stats",
            "irr_results", "coverage", "rankings", "test_results")

FORMATS = ("machine-readable", "markdown", "aligned-text")


class ReportError(ValueError):
    """Invalid bundle or unknown render format."""


def digest_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def fmt_pct(value: float) -> str:
    return f"{value:.2f}"


def fmt_coef(value: float) -> str:
    return f"{value:.3f}"


def fmt_p(value: float) -> str:
    return "<0.001" if value < 0.001 else f"{value:.3f}"


@dataclass
class ReportBundle:
    """All report sections; unset sections must carry a skip reason."""

    generated_at: str = ""
    input_digests: dict[str, str] = field(default_factory=dict)
    taxonomy_validation: dict | None = None
    pipeline_audit: dict | None = None
    corpus_stats: dict[str, dict] | None = None
    irr_results: list[dict] | None = None
    coverage: dict[str, dict[str, float]] | None = None
    rankings: dict[str, list[dict]] | None = None
    test_results: list[dict] | None = None
    skipped: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        for name in SECTIONS:
            if getattr(self, name) is None and name not in self.skipped:
                raise ReportError(f"section {name} neither present nor marked skipped")

    def skip(self, section: str, reason: str) -> None:
        if section not in SECTIONS:
            raise ReportError(f"unknown section {section!r}")
        self.skipped[section] = reason


def _aligned(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(row))))
    return "\n".join(lines)


def _markdown(rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(rows[0]) + " |",
             "| " + " | ".join("---" for _ in rows[0]) + " |"]
    lines.extend("| " + " | ".join(row) + " |" for row in rows[1:])
    return "\n".join(lines)


def _corpus_rows(corpus_stats: Mapping[str, dict]) -> list[list[str]]:
    header = ["Project"]
    for metric in ("Contributors", "Resolution time (days)", "Comments"):
        header += [f"{metric} {c}" for c in ("min", "max", "mean", "median", "mode")]
    rows = [header]
    for project, stats in corpus_stats.items():
        row = [project]
        for metric in ("contributors", "resolution_days", "comments"):
            m = stats.get(metric)
            if m is None:
                row += ["-"] * 5
                continue
            row += [f"{m['min']:g}", f"{m['max']:g}", str(m['mean_rounded']),
                    f"{m['median']:g}", f"{m['mode']:g}"]
        rows.append(row)
    return rows


def _coverage_rows(coverage: Mapping[str, Mapping[str, float]],
                   category_counts: Mapping[str, int] | None) -> list[list[str]]:
    projects = list(coverage)
    categories: list[str] = []
    for per_project in coverage.values():
        for cat in per_project:
            if cat not in categories:
                categories.append(cat)
    header = ["Privacy goal"]
    if category_counts:
        header.append("Requirements")
    header += [f"{p} (%)" for p in projects]
    rows = [header]
    for cat in categories:
        row = [cat]
        if category_counts:
            row.append(str(category_counts.get(cat, "")))
        row += [fmt_pct(coverage[p].get(cat, 0.0)) for p in projects]
        rows.append(row)
    return rows


def _irr_rows(irr_results: Sequence[Mapping]) -> list[list[str]]:
    rows = [["Statistic", "Scope", "Distance", "Value", "Units", "Skipped", "Degenerate"]]
    for result in irr_results:
        rows.append([
            str(result.get("statistic", "")),
            str(result.get("scope", "")),
            str(result.get("distance", "-")),
            fmt_coef(result["value"]),
            str(result.get("n_units", "")),
            str(result.get("n_skipped", 0)),
            "yes" if result.get("degenerate") else "no",
        ])
    return rows


def _test_rows(test_results: Sequence[Mapping]) -> list[list[str]]:
    rows = [["Project", "Attribute", "One-sided tail", "p-value", "Effect size"]]
    for result in test_results:
        rows.append([
            str(result.get("project", "")),
            str(result.get("attribute", "")),
            str(result.get("alternative", "")).capitalize(),
            fmt_p(result["p_value"]),
            fmt_coef(result["cles"]),
        ])
    return rows


def _ranking_rows(rankings: Mapping[str, Sequence[Mapping]]) -> list[list[str]]:
    rows = [["Project", "Rank", "Requirement", "Issues"]]
    for project, ranked in rankings.items():
        for idx, entry in enumerate(ranked, start=1):
            rows.append([project, str(idx), entry["requirement_id"], str(entry["count"])])
    return rows


def _render_tables(bundle: ReportBundle, table) -> str:
    parts: list[str] = []

    def section(title: str, name: str, body_fn) -> None:
        parts.append(f"## {title}")
        if name in bundle.skipped:
            parts.append(f"skipped: {bundle.skipped[name]}")
        else:
            parts.append(body_fn())
        parts.append("")

    def taxonomy_body() -> str:
        tv = bundle.taxonomy_validation
        lines = [f"requirements: {tv['requirements']}",
                 f"categories: {tv['categories']}",
                 f"memberships: {tv['memberships']}"]
        rows = [["Category", "Requirements"]]
        rows += [[cat, str(count)] for cat, count in tv["category_counts"].items()]
        return "\n".join(lines) + "\n" + table(rows)

    def audit_body() -> str:
        audit = bundle.pipeline_audit
        rows = [["Source", "Shortlisted", "Identified"]]
        for source in audit["shortlisted_per_source"]:
            rows.append([source, str(audit["shortlisted_per_source"][source]),
                         str(audit["identified_per_source"].get(source, 0))])
        tail = (f"merged away: {audit['merged_away']}\n"
                f"final requirements: {audit['final_count']}")
        return table(rows) + "\n" + tail

    section("Taxonomy validation", "taxonomy_validation", taxonomy_body)
    section("Refinement pipeline audit", "pipeline_audit", audit_body)
    section("Corpus descriptive statistics", "corpus_stats",
            lambda: table(_corpus_rows(bundle.corpus_stats)))
    section("Inter-rater reliability", "irr_results",
            lambda: table(_irr_rows(bundle.irr_results)))
    section("Coverage by privacy goal", "coverage",
            lambda: table(_coverage_rows(
                bundle.coverage,
                (bundle.taxonomy_validation or {}).get("category_counts"))))
    section("Top requirements", "rankings",
            lambda: table(_ranking_rows(bundle.rankings)))
    section("Rank-sum tests: non-privacy vs privacy", "test_results",
            lambda: table(_test_rows(bundle.test_results)))

    header = ["# Reproduction report", f"generated-at: {bundle.generated_at}"]
    header += [f"input {name}: sha256:{digest}" for name, digest in sorted(bundle.input_digests.items())]
    header.append("")
    return "\n".join(header + parts).rstrip() + "\n"


def render_tables_csv(bundle: ReportBundle) -> dict[str, str]:
    """The tabular sections as CSV, one document per section present."""
    bundle.validate()
    out: dict[str, str] = {}

    def emit(name: str, rows: Sequence[Sequence[str]]) -> None:
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(rows)
        out[name] = buffer.getvalue()

    if bundle.corpus_stats is not None:
        emit("corpus_stats", _corpus_rows(bundle.corpus_stats))
    if bundle.irr_results is not None:
        emit("irr_results", _irr_rows(bundle.irr_results))
    if bundle.coverage is not None:
        emit("coverage", _coverage_rows(
            bundle.coverage, (bundle.taxonomy_validation or {}).get("category_counts")))
    if bundle.rankings is not None:
        emit("rankings", _ranking_rows(bundle.rankings))
    if bundle.test_results is not None:
        emit("test_results", _test_rows(bundle.test_results))
    return out


def render_report(bundle: ReportBundle, fmt: str = "machine-readable") -> str:
    """Render the bundle deterministically in the requested format."""
    bundle.validate()
    if fmt == "machine-readable":
        payload = {
            "generated_at": bundle.generated_at,
            "input_digests": dict(sorted(bundle.input_digests.items())),
            "skipped": dict(sorted(bundle.skipped.items())),
        }
        for name in SECTIONS:
            payload[name] = getattr(bundle, name)
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "markdown":
        return _render_tables(bundle, _markdown)
    if fmt == "aligned-text":
        return _render_tables(bundle, _aligned)
    raise ReportError(f"unknown format {fmt!r} (expected one of {', '.join(FORMATS)})")
