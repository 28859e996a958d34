"""Privacy-requirements taxonomy: loading, validation, queries and traceability.

The taxonomy is data, not code: a versioned seed file transcribed from the
regulation analysis, one record per requirement (id, action verb, affected
party/object, target result, category memberships, regulation references).
This module enforces its structure — the closed action-verb list, the
seven-category tree, per-category counts and locator syntax — and answers
category and traceability queries.  Requirement ids are stable and never
renumbered; extensions append new ids.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

ACTION_VERBS = frozenset({
    "ALLOW", "ARCHIVE", "COLLECT", "DOCUMENT", "ERASE", "IMPLEMENT",
    "INFORM", "MAINTAIN", "NOTIFY", "OBTAIN", "PRESENT", "PROTECT",
    "PROVIDE", "REQUEST", "SHOW", "STORE", "TRANSMIT", "USE",
})

# Category tree: seven top-level privacy goals, three with subcategories.
CATEGORY_TREE: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("user-participation", ()),
    ("notice", ("data-subjects", "relevant-parties")),
    ("user-desirability", ("consent", "choice", "preference")),
    ("data-processing", ("collection", "use", "storage", "erasure", "transfer", "record")),
    ("breach", ()),
    ("complaint-request", ()),
    ("security", ()),
)

# Shipped-seed shape: total requirement count and distinct requirements per
# category (a requirement may belong to several categories, so these sum to
# more than the total).
EXPECTED_TOTAL = 71
EXPECTED_CATEGORY_COUNTS = {
    "user-participation": 9,
    "notice": 32,
    "user-desirability": 10,
    "data-processing": 16,
    "breach": 6,
    "complaint-request": 5,
    "security": 13,
}

# Locator syntax per regulation source.
LOCATOR_PATTERNS = {
    "GDPR": re.compile(r"^\d+(\(\d+\))*(\([a-z]\))*$"),
    "ISO29100": re.compile(r"^\d+(\.\d+)*$"),
    "ThailandPDPA": re.compile(r"^\d+(-\d+)*$"),
    "APEC": re.compile(r"^(\(\d+-\d+\)|\d+)(-\d+)*$"),
}

SOURCES = tuple(LOCATOR_PATTERNS)

DEFAULT_SEED = Path(__file__).resolve().parents[2] / "data" / "taxonomy-v1.seed"


class TaxonomyParseError(ValueError):
    """Seed document is not well-formed; carries the offending location."""

    def __init__(self, message: str, line: int | None = None, fields: str | None = None):
        loc = f"line {line}" if line is not None else "document"
        if fields:
            loc += f", field {fields}"
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.fields = fields


class TaxonomyValidationError(ValueError):
    """A complete list of every violated structural rule."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("taxonomy invalid:\n" + "\n".join(f"- {v}" for v in self.violations))


class NotFoundError(KeyError):
    """Unknown requirement or category id."""


@dataclass(frozen=True, order=True)
class RegulationRef:
    """A pointer into one of the four regulation sources, e.g. GDPR 13(2)(c)."""

    source: str
    locator: str

    def __str__(self) -> str:
        return f"{self.source}:{self.locator}"

    @classmethod
    def parse(cls, text: str) -> "RegulationRef":
        source, sep, locator = text.partition(":")
        if not sep:
            raise ValueError(f"reference {text!r} is not SOURCE:locator")
        return cls(source=source.strip(), locator=locator.strip())

    def problems(self) -> list[str]:
        out = []
        if self.source not in LOCATOR_PATTERNS:
            out.append(f"unknown source {self.source!r} (known: {', '.join(SOURCES)})")
            return out
        if not self.locator:
            out.append(f"{self.source} reference has an empty locator")
        elif not LOCATOR_PATTERNS[self.source].match(self.locator):
            out.append(f"locator {self.locator!r} invalid for source {self.source}")
        return out


@dataclass(frozen=True, order=True)
class CategoryMembership:
    category: str
    subcategory: str | None = None

    def __str__(self) -> str:
        return self.category if self.subcategory is None else f"{self.category}/{self.subcategory}"

    @classmethod
    def parse(cls, text: str) -> "CategoryMembership":
        category, sep, sub = text.partition("/")
        return cls(category=category.strip(), subcategory=sub.strip() if sep else None)


@dataclass(frozen=True)
class Requirement:
    """One taxonomy entry: action verb + affected party/object + target result."""

    id: str
    action: str
    object: str
    target: str
    categories: frozenset[CategoryMembership]
    refs: tuple[RegulationRef, ...]

    @property
    def text(self) -> str:
        return f"{self.action} {self.object} {self.target}"

    def category_ids(self) -> frozenset[str]:
        return frozenset(m.category for m in self.categories)

    def refs_by_source(self) -> dict[str, list[str]]:
        grouped: dict[str, list[str]] = {}
        for ref in sorted(set(self.refs)):
            grouped.setdefault(ref.source, []).append(ref.locator)
        return grouped


@dataclass(frozen=True)
class Category:
    id: str
    subcategories: tuple[str, ...]


@dataclass(frozen=True)
class CategoryTree:
    categories: tuple[Category, ...]

    @classmethod
    def default(cls) -> "CategoryTree":
        return cls(tuple(Category(cid, subs) for cid, subs in CATEGORY_TREE))

    def has(self, category: str, subcategory: str | None = None) -> bool:
        for cat in self.categories:
            if cat.id == category:
                return subcategory is None or subcategory in cat.subcategories
        return False


def _id_key(rid: str) -> tuple:
    digits = "".join(ch for ch in rid if ch.isdigit())
    return (int(digits) if digits else 0, rid)


@dataclass(frozen=True)
class Taxonomy:
    """Immutable after load; safe to share across concurrent readers."""

    requirements: tuple[Requirement, ...]
    tree: CategoryTree
    version: str

    @property
    def by_id(self) -> Mapping[str, Requirement]:
        return {r.id: r for r in self.requirements}

    def category_counts(self) -> dict[str, int]:
        counts = {c.id: 0 for c in self.tree.categories}
        for req in self.requirements:
            for cid in req.category_ids():
                if cid in counts:
                    counts[cid] += 1
        return counts


def validate(requirements: Sequence[Requirement], tree: CategoryTree,
             expected_total: int | None = EXPECTED_TOTAL,
             expected_counts: Mapping[str, int] | None = None) -> list[str]:
    """Return every violated rule (empty list when the taxonomy is valid).

    Validation is total: it never stops at the first problem.
    """
    if expected_counts is None and expected_total == EXPECTED_TOTAL:
        expected_counts = EXPECTED_CATEGORY_COUNTS
    violations: list[str] = []

    seen: set[str] = set()
    for req in requirements:
        if req.id in seen:
            violations.append(f"duplicate id {req.id}")
        seen.add(req.id)

    for req in requirements:
        if req.action not in ACTION_VERBS:
            violations.append(f"{req.id}: action {req.action!r} not in the closed verb list")
        if not req.object.strip():
            violations.append(f"{req.id}: empty object")
        if not req.target.strip():
            violations.append(f"{req.id}: empty target")
        if not req.categories:
            violations.append(f"{req.id}: no category membership")
        for member in sorted(req.categories):
            if not tree.has(member.category, member.subcategory):
                violations.append(f"{req.id}: unknown category {member}")
        if not req.refs:
            violations.append(f"{req.id}: no regulation reference")
        for ref in req.refs:
            violations.extend(f"{req.id}: {p}" for p in ref.problems())

    if expected_total is not None and len(requirements) != expected_total:
        violations.append(f"{len(requirements)} requirements, expected {expected_total}")
    if expected_counts:
        counts = {c.id: 0 for c in tree.categories}
        for req in requirements:
            for cid in req.category_ids():
                if cid in counts:
                    counts[cid] += 1
        for cid, expected in expected_counts.items():
            if counts.get(cid, 0) != expected:
                violations.append(
                    f"category {cid}: {counts.get(cid, 0)} requirements, expected {expected}")
    return violations


def parse_seed(text: str) -> tuple[list[Requirement], str]:
    """Parse the seed document into requirement records plus its version.

    Format: optional ``version=`` header, then one tab-separated record per
    line with fields id, action, object, target, categories, refs.
    Categories and refs are ';'-separated lists.
    """
    version = "unversioned"
    requirements: list[Requirement] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("version="):
            version = line.split("=", 1)[1].strip()
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise TaxonomyParseError(
                f"expected 6 tab-separated fields, got {len(parts)}", line=lineno)
        rid, action, obj, target, cats, refs = (p.strip() for p in parts)
        if not rid:
            raise TaxonomyParseError("empty requirement id", line=lineno, fields="id")
        try:
            categories = frozenset(
                CategoryMembership.parse(c) for c in cats.split(";") if c.strip())
        except ValueError as exc:
            raise TaxonomyParseError(str(exc), line=lineno, fields="categories") from exc
        try:
            parsed_refs = tuple(RegulationRef.parse(r) for r in refs.split(";") if r.strip())
        except ValueError as exc:
            raise TaxonomyParseError(str(exc), line=lineno, fields="refs") from exc
        requirements.append(Requirement(
            id=rid, action=action, object=obj, target=target,
            categories=categories, refs=parsed_refs))
    return requirements, version


def load_taxonomy(path: str | Path, expected_total: int | None = EXPECTED_TOTAL) -> Taxonomy:
    """Load and validate a taxonomy seed file.

    Raises TaxonomyParseError on malformed documents and
    TaxonomyValidationError (listing every violation) on structural problems.
    Pass ``expected_total=None`` to skip the shipped-seed shape checks, e.g.
    for extension drafts.
    """
    text = Path(path).read_text(encoding="utf-8")
    requirements, version = parse_seed(text)
    tree = CategoryTree.default()
    violations = validate(requirements, tree, expected_total=expected_total)
    if violations:
        raise TaxonomyValidationError(violations)
    ordered = tuple(sorted(requirements, key=lambda r: _id_key(r.id)))
    return Taxonomy(requirements=ordered, tree=tree, version=version)


def requirements_by_category(taxonomy: Taxonomy, category: str,
                             subcategory: str | None = None) -> list[Requirement]:
    """Requirements whose membership set contains the query, in id order."""
    if not taxonomy.tree.has(category, subcategory):
        raise NotFoundError(f"unknown category {category}"
                            + (f"/{subcategory}" if subcategory else ""))
    out = []
    for req in taxonomy.requirements:
        for member in req.categories:
            if member.category != category:
                continue
            if subcategory is None or member.subcategory == subcategory:
                out.append(req)
                break
    return out


def trace_requirement(taxonomy: Taxonomy, rid: str) -> dict[str, list[str]]:
    """All regulation references of one requirement, grouped by source."""
    req = taxonomy.by_id.get(rid)
    if req is None:
        raise NotFoundError(f"unknown requirement id {rid}")
    return req.refs_by_source()


@dataclass(frozen=True)
class TraceEntry:
    requirement_id: str
    text: str
    refs: dict[str, list[str]]


@dataclass(frozen=True)
class TraceReport:
    issue_id: str
    entries: tuple[TraceEntry, ...]

    def union_refs(self) -> dict[str, list[str]]:
        merged: dict[str, set[str]] = {}
        for entry in self.entries:
            for source, locators in entry.refs.items():
                merged.setdefault(source, set()).update(locators)
        return {source: sorted(locs) for source, locs in sorted(merged.items())}


def trace_issue(issue_id: str, labels: Iterable[str], taxonomy: Taxonomy) -> TraceReport:
    """Map one issue's final labels back to per-source regulation locators.

    Each requirement appears once even if labeled twice; a label missing from
    the taxonomy is a validation error naming the id.
    """
    entries = []
    seen: set[str] = set()
    for rid in sorted(set(labels), key=_id_key):
        req = taxonomy.by_id.get(rid)
        if req is None:
            raise TaxonomyValidationError([f"issue {issue_id}: label {rid} not in taxonomy"])
        if rid in seen:
            continue
        seen.add(rid)
        entries.append(TraceEntry(requirement_id=rid, text=req.text, refs=req.refs_by_source()))
    return TraceReport(issue_id=issue_id, entries=tuple(entries))
