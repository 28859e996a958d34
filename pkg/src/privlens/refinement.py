"""Refinement of coded regulation statements into merged requirements.

Regulation statements are hand-coded into an (action verb, parties/objects,
target result) pattern with a coder-assigned goal token.  This module
mechanises the refinement pass over those codes: group statements that share
a goal and the same normalized parties, merge each group into one requirement
(picking the action verb by goal-intent precedence when members disagree),
flag contradictory statements, and keep the bookkeeping honest so no
provenance is lost between identification and the final requirement set.

Vocabulary differences across sources are resolved toward GDPR terms through
a fixed, extensible synonym table (PII -> personal data, PII principal ->
data subject, and so on).
"""

from __future__ import annotations

import csv
import io
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .taxonomy import RegulationRef

# Quoted-pair vocabulary substitutions, applied longest-first so that
# "PII principal" wins over bare "PII".  Values never contain keys, which
# keeps normalization idempotent.
DEFAULT_SYNONYMS: tuple[tuple[str, str], ...] = (
    ("processing of PII", "processing of personal data"),
    ("PII principals", "data subjects"),
    ("PII principal", "data subject"),
    ("PII controllers", "data controllers"),
    ("PII controller", "data controller"),
    ("PII processors", "data processors"),
    ("PII processor", "data processor"),
    ("PII", "personal data"),
)

# Goal-intent classes and the action verb each one forces when the grouped
# statements disagree on the verb.
INTENT_VERBS: dict[str, str] = {
    "rights": "ALLOW",
    "give-info": "PROVIDE",
    "acquire-consent": "OBTAIN",
    "options": "PRESENT",
    "display": "SHOW",
    "alert": "NOTIFY",
    "mechanism": "IMPLEMENT",
    "deletion": "ERASE",
}

TARGET_SEPARATOR = "; "


class RefinementError(ValueError):
    """Invalid coded-statement input."""


class UnmergeableGroupError(RefinementError):
    """Members disagree on the action verb and no intent class resolves it.

    Carries the group for manual review.
    """

    def __init__(self, group: "SimilarityGroup", reason: str):
        super().__init__(f"group {group.goal_key!r} unmergeable: {reason}")
        self.group = group


class AuditError(RefinementError):
    """Pipeline counts do not reconcile; provenance was lost somewhere."""


def _compile_table(table: Sequence[tuple[str, str]]):
    ordered = sorted(table, key=lambda kv: len(kv[0]), reverse=True)
    pattern = re.compile("|".join(re.escape(k) for k, _ in ordered))
    mapping = dict(ordered)
    return pattern, mapping


def normalize_terms(terms: Iterable[str],
                    synonyms: Sequence[tuple[str, str]] = DEFAULT_SYNONYMS) -> list[str]:
    """Substitute GDPR vocabulary via the synonym table.

    Order is preserved, unknown terms pass through unchanged, and the
    operation is idempotent.
    """
    pattern, mapping = _compile_table(synonyms)
    return [pattern.sub(lambda m: mapping[m.group(0)], term) for term in terms]


@dataclass(frozen=True)
class CodedStatement:
    """One regulation statement as coded by a human coder.

    ``is_requirement`` records the coder's judgment that the statement yields
    a software requirement; only such statements enter grouping and merging.
    ``polarity`` is an optional ``axis:pole`` marker used by inconsistency
    detection (e.g. ``purpose:required`` vs ``purpose:not-required``).
    """

    source_ref: RegulationRef
    raw_quote: str
    is_requirement: bool
    action: str = ""
    parties_objects: tuple[str, ...] = ()
    target: str = ""
    goal_key: str = ""
    intent_class: str | None = None
    polarity: str | None = None

    def __post_init__(self):
        if not self.raw_quote.strip():
            raise RefinementError(f"{self.source_ref}: empty raw quote")

    def problems(self) -> list[str]:
        if not self.is_requirement:
            return []
        out = []
        if not self.action:
            out.append("missing action")
        if not self.parties_objects:
            out.append("missing parties/objects")
        if not self.target:
            out.append("missing target")
        if not self.goal_key:
            out.append("missing goal-key")
        return [f"{self.source_ref}: {p}" for p in out]


@dataclass(frozen=True)
class SimilarityGroup:
    """Requirement-bearing statements sharing a goal and normalized parties."""

    goal_key: str
    parties_objects: tuple[str, ...]
    members: tuple[CodedStatement, ...]

    def __post_init__(self):
        if not self.members:
            raise RefinementError("similarity group with no members")
        self.intent_class  # one intent class per group; conflicts are data errors

    @property
    def intent_class(self) -> str | None:
        declared = {m.intent_class for m in self.members if m.intent_class}
        if len(declared) > 1:
            raise RefinementError(
                f"group {self.goal_key!r} carries conflicting intent classes: {sorted(declared)}")
        return next(iter(declared), None)

    @property
    def first_ref(self) -> RegulationRef:
        return self.members[0].source_ref


@dataclass(frozen=True)
class MergedRequirement:
    """The merge of one similarity group.

    ``provenance`` lists every member's source reference (sorted, duplicates
    kept), so its cardinality equals the group size.  ``parent`` and
    ``operator`` (AND/OR) are reserved for parent/child requirement
    refinement; no operation consumes them yet.
    """

    action: str
    object: str
    target: str
    goal_key: str
    provenance: tuple[RegulationRef, ...]
    needs_review: bool = False
    parent: str | None = None
    operator: str | None = None

    @property
    def text(self) -> str:
        return f"{self.action} {self.object} {self.target}"


def group_candidates(statements: Sequence[CodedStatement],
                     synonyms: Sequence[tuple[str, str]] = DEFAULT_SYNONYMS) -> list[SimilarityGroup]:
    """Partition requirement-bearing statements by (goal-key, normalized
    parties/objects).

    Non-requirement statements are excluded.  Groups come back ordered by
    their first member's position in the input, members in input order.
    """
    problems: list[str] = []
    for stmt in statements:
        problems.extend(stmt.problems())
    if problems:
        raise RefinementError("coded statements invalid:\n" + "\n".join(f"- {p}" for p in problems))

    order: list[tuple[str, tuple[str, ...]]] = []
    buckets: dict[tuple[str, tuple[str, ...]], list[CodedStatement]] = {}
    for stmt in statements:
        if not stmt.is_requirement:
            continue
        key = (stmt.goal_key, tuple(normalize_terms(stmt.parties_objects, synonyms)))
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append(stmt)
    return [SimilarityGroup(goal_key=k[0], parties_objects=k[1], members=tuple(buckets[k]))
            for k in order]


def _merge_targets(targets: Sequence[str],
                   synonyms: Sequence[tuple[str, str]]) -> tuple[str, bool]:
    distinct = list(dict.fromkeys(targets))
    if len(distinct) == 1:
        return distinct[0], False
    normalized = list(dict.fromkeys(normalize_terms(distinct, synonyms)))
    if len(normalized) == 1:
        return normalized[0], False
    # nothing collapses: combine rather than invent wording, and flag for review
    return TARGET_SEPARATOR.join(sorted(normalized)), True


def merge_group(group: SimilarityGroup,
                synonyms: Sequence[tuple[str, str]] = DEFAULT_SYNONYMS) -> MergedRequirement:
    """Merge one similarity group into a single requirement.

    The action verb is kept when all members agree; otherwise the group's
    goal-intent class picks it (rights->ALLOW, give-info->PROVIDE, ...).
    Identical targets are kept verbatim; differing targets collapse only
    through the synonym table, else they are concatenated and flagged.
    The result is invariant under permutation of the members.
    """
    actions = list(dict.fromkeys(m.action for m in group.members))
    if len(actions) == 1:
        action = actions[0]
    else:
        intent = group.intent_class
        if intent is None:
            raise UnmergeableGroupError(group, f"actions {sorted(actions)} differ and no intent class is coded")
        if intent not in INTENT_VERBS:
            raise UnmergeableGroupError(group, f"intent class {intent!r} matches no precedence rule")
        action = INTENT_VERBS[intent]
    target, needs_review = _merge_targets([m.target for m in group.members], synonyms)
    return MergedRequirement(
        action=action,
        object=" and ".join(group.parties_objects),
        target=target,
        goal_key=group.goal_key,
        provenance=tuple(sorted(m.source_ref for m in group.members)),
        needs_review=needs_review,
    )


@dataclass(frozen=True)
class Inconsistency:
    """Two coded statements that contradict each other on the same goal."""

    a: CodedStatement
    b: CodedStatement
    axis: str
    poles: tuple[str, str]

    def describe(self) -> str:
        return (f"{self.a.source_ref} vs {self.b.source_ref}: "
                f"{self.axis} coded {self.poles[0]!r} against {self.poles[1]!r}")


def detect_inconsistencies(statements: Sequence[CodedStatement],
                           synonyms: Sequence[tuple[str, str]] = DEFAULT_SYNONYMS) -> list[Inconsistency]:
    """Flag statement pairs sharing goal and parties whose polarity markers
    disagree on the same axis.

    Reports only; nothing is deleted.  Statements without a polarity marker
    are never flagged.
    """
    reports: list[Inconsistency] = []
    groups = group_candidates(statements, synonyms)
    for group in groups:
        marked = [m for m in group.members if m.polarity]
        for i in range(len(marked)):
            for j in range(i + 1, len(marked)):
                axis_a, _, pole_a = marked[i].polarity.partition(":")
                axis_b, _, pole_b = marked[j].polarity.partition(":")
                if axis_a == axis_b and pole_a != pole_b:
                    reports.append(Inconsistency(a=marked[i], b=marked[j],
                                                 axis=axis_a, poles=(pole_a, pole_b)))
    return reports


@dataclass(frozen=True)
class PipelineAudit:
    """Counts reconciling the whole refinement run."""

    shortlisted_per_source: dict[str, int]
    identified_per_source: dict[str, int]
    merged_away: int
    final_count: int

    @property
    def identified_total(self) -> int:
        return sum(self.identified_per_source.values())

    @property
    def shortlisted_total(self) -> int:
        return sum(self.shortlisted_per_source.values())


def pipeline_audit(statements: Sequence[CodedStatement],
                   groups: Sequence[SimilarityGroup],
                   merged: Sequence[MergedRequirement]) -> PipelineAudit:
    """Compute the run's bookkeeping and fail loudly if it does not reconcile.

    final must equal identified minus merged-away, i.e. every identified
    statement is accounted for in exactly one merged requirement's provenance.
    """
    shortlisted = Counter(s.source_ref.source for s in statements)
    identified = Counter(s.source_ref.source for s in statements if s.is_requirement)
    merged_away = sum(len(m.provenance) - 1 for m in merged)
    final = len(merged)
    identified_total = sum(identified.values())
    if final != identified_total - merged_away:
        raise AuditError(
            f"final count {final} != identified {identified_total} - merged-away {merged_away}; "
            "provenance was lost")
    grouped = sum(len(g.members) for g in groups)
    if grouped != identified_total:
        raise AuditError(
            f"groups cover {grouped} statements but {identified_total} were identified")
    return PipelineAudit(
        shortlisted_per_source=dict(sorted(shortlisted.items())),
        identified_per_source=dict(sorted(identified.items())),
        merged_away=merged_away,
        final_count=final,
    )


def run_refinement(statements: Sequence[CodedStatement],
                   synonyms: Sequence[tuple[str, str]] = DEFAULT_SYNONYMS,
                   ) -> tuple[list[SimilarityGroup], list[MergedRequirement], PipelineAudit]:
    """Group, merge and audit in one deterministic pass."""
    groups = group_candidates(statements, synonyms)
    merged = [merge_group(g, synonyms) for g in groups]
    audit = pipeline_audit(statements, groups, merged)
    return groups, merged, audit


CODED_COLUMNS = ["source", "locator", "raw_quote", "is_requirement", "action",
                 "parties", "target", "goal_key", "intent_class", "polarity"]

_TRUE = {"true", "1", "yes", "y"}
_FALSE = {"false", "0", "no", "n", ""}


def parse_coded_statements(text: str) -> list[CodedStatement]:
    """Parse the tab-separated coded-statement file (see CODED_COLUMNS).

    Parties are '|'-separated within their field.
    """
    reader = csv.DictReader(io.StringIO(text), delimiter="\t")
    missing = [c for c in CODED_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise RefinementError(f"coded-statement file missing columns: {', '.join(missing)}")
    statements = []
    for row_no, row in enumerate(reader, start=2):
        flag = (row["is_requirement"] or "").strip().lower()
        if flag in _TRUE:
            is_req = True
        elif flag in _FALSE:
            is_req = False
        else:
            raise RefinementError(f"row {row_no}: bad is_requirement value {row['is_requirement']!r}")
        statements.append(CodedStatement(
            source_ref=RegulationRef(source=row["source"].strip(), locator=row["locator"].strip()),
            raw_quote=row["raw_quote"],
            is_requirement=is_req,
            action=(row["action"] or "").strip(),
            parties_objects=tuple(p.strip() for p in (row["parties"] or "").split("|") if p.strip()),
            target=(row["target"] or "").strip(),
            goal_key=(row["goal_key"] or "").strip(),
            intent_class=(row["intent_class"] or "").strip() or None,
            polarity=(row["polarity"] or "").strip() or None,
        ))
    return statements


def load_coded_statements(path: str | Path) -> list[CodedStatement]:
    return parse_coded_statements(Path(path).read_text(encoding="utf-8"))


def load_synonyms(path: str | Path) -> tuple[tuple[str, str], ...]:
    """Extend the shipped synonym table from a two-column TSV."""
    extra = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise RefinementError(f"synonyms line {lineno}: expected 2 tab-separated fields")
        extra.append((parts[0].strip(), parts[1].strip()))
    return DEFAULT_SYNONYMS + tuple(extra)
