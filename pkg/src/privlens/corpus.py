"""Issue-tracker export parsing, privacy filtering and descriptive statistics.

Monorail CSV and Jira JSON exports are normalized into one canonical issue
model so everything downstream is tracker-agnostic.  The canonical format is
JSON Lines, one issue per line, dates in ISO-8601; serializing and
re-ingesting it round-trips exactly.

Filtering keeps issues explicitly tagged privacy in their component field
with an allowed status.  A separate low-information flag assists the manual
exclusion of issues whose description carries too little content to classify;
the flag never excludes anything by itself.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterable, Sequence

CHROME_ISSUE_TYPES = ("bug", "bug-regression", "bug-security", "feature", "task", "unspecified")
MOODLE_ISSUE_TYPES = ("bug", "epic", "improvement", "new-feature", "task", "sub-task", "functional-test")
KNOWN_ISSUE_TYPES = frozenset(CHROME_ISSUE_TYPES) | frozenset(MOODLE_ISSUE_TYPES)

DEFAULT_PRIVACY_TAG = "privacy"
DEFAULT_STATUSES = frozenset({"assigned", "fixed", "verified"})
DEFAULT_MIN_CONTENT_TOKENS = 15

FORMATS = ("monorail-csv", "jira-json", "canonical-json")


class CorpusError(ValueError):
    """Unreadable or malformed tracker export."""


@dataclass(frozen=True)
class IssueReport:
    """A normalized issue-tracker record."""

    project: str
    issue_id: str
    title: str
    description: str
    issue_type: str
    status: str
    components: tuple[str, ...]
    created: datetime
    resolved: datetime | None = None
    contributors: int = 1
    comments: int = 0
    extras: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.contributors < 1:
            raise CorpusError(f"issue {self.issue_id}: contributors must be >= 1")
        if self.comments < 0:
            raise CorpusError(f"issue {self.issue_id}: comments must be >= 0")

    @property
    def resolution_days(self) -> int | None:
        """Calendar days between created and resolved, floored, minimum 1."""
        if self.resolved is None:
            return None
        return max(1, (self.resolved - self.created).days)


def normalize_issue_type(raw: str) -> str:
    slug = re.sub(r"[\s_]+", "-", (raw or "").strip().lower())
    return slug if slug in KNOWN_ISSUE_TYPES else "unspecified"


_MONORAIL_DATE = "%b %d, %Y %H:%M:%S"


def _parse_date(raw: str) -> datetime:
    raw = raw.strip()
    try:
        return datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        pass
    try:
        return datetime.strptime(raw, _MONORAIL_DATE)
    except ValueError as exc:
        raise CorpusError(f"unparseable date {raw!r}") from exc


@dataclass
class IngestResult:
    issues: list[IssueReport]
    skipped: int = 0
    skipped_rows: list[tuple[int, str]] = field(default_factory=list)


def _split_components(raw: str) -> tuple[str, ...]:
    return tuple(c.strip() for c in re.split(r"[,;]", raw or "") if c.strip())


def _ingest_monorail_csv(text: str, project: str) -> IngestResult:
    reader = csv.DictReader(io.StringIO(text))
    result = IngestResult(issues=[])
    if reader.fieldnames is None:
        return result
    mapped = {"ID", "Summary", "Description", "Type", "Status", "Component", "Components",
              "Opened", "Closed", "Contributors", "Comments"}
    for row_no, row in enumerate(reader, start=2):
        try:
            issue_id = (row.get("ID") or "").strip()
            title = (row.get("Summary") or "").strip()
            if not issue_id or not title:
                raise CorpusError("missing ID or Summary")
            opened = row.get("Opened") or ""
            if not opened.strip():
                raise CorpusError("missing Opened date")
            closed = (row.get("Closed") or "").strip()
            components = _split_components(row.get("Components") or row.get("Component") or "")
            extras = tuple(sorted((k, v) for k, v in row.items()
                                  if k not in mapped and v not in (None, "")))
            result.issues.append(IssueReport(
                project=project,
                issue_id=issue_id,
                title=title,
                description=row.get("Description") or "",
                issue_type=normalize_issue_type(row.get("Type") or ""),
                status=(row.get("Status") or "").strip(),
                components=components,
                created=_parse_date(opened),
                resolved=_parse_date(closed) if closed else None,
                contributors=max(1, int(row.get("Contributors") or 1)),
                comments=max(0, int(row.get("Comments") or 0)),
                extras=extras,
            ))
        except (CorpusError, ValueError) as exc:
            result.skipped += 1
            result.skipped_rows.append((row_no, str(exc)))
    return result


def _jira_description(raw) -> str:
    if raw is None:
        return ""
    if isinstance(raw, str):
        return raw
    # Atlassian document format: walk the node tree collecting text
    chunks: list[str] = []

    def walk(node):
        if isinstance(node, dict):
            if isinstance(node.get("text"), str):
                chunks.append(node["text"])
            for child in node.get("content", []):
                walk(child)
        elif isinstance(node, list):
            for child in node:
                walk(child)

    walk(raw)
    return "\n".join(chunks)


def _ingest_jira_json(text: str, project: str) -> IngestResult:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"not valid JSON: {exc}") from exc
    records = payload.get("issues", payload) if isinstance(payload, dict) else payload
    if not isinstance(records, list):
        raise CorpusError("jira export must be a list of issues or {'issues': [...]}")
    result = IngestResult(issues=[])
    for idx, record in enumerate(records):
        try:
            key = record.get("key") or ""
            fields_ = record.get("fields") or {}
            if not key:
                raise CorpusError("missing issue key")
            created = fields_.get("created")
            if not created:
                raise CorpusError("missing created date")
            comment = fields_.get("comment") or {}
            comments = comment.get("total")
            if comments is None:
                comments = len(comment.get("comments", []))
            people = {who.get("name") or who.get("displayName")
                      for f in ("reporter", "assignee", "creator")
                      if isinstance(who := fields_.get(f), dict)}
            contributors = fields_.get("contributors")
            if contributors is None:
                contributors = max(1, len({p for p in people if p}))
            proj = (fields_.get("project") or {}).get("key") or key.split("-")[0] or project
            result.issues.append(IssueReport(
                project=proj or project,
                issue_id=key,
                title=fields_.get("summary") or "",
                description=_jira_description(fields_.get("description")),
                issue_type=normalize_issue_type((fields_.get("issuetype") or {}).get("name") or ""),
                status=((fields_.get("status") or {}).get("name") or "").strip(),
                components=tuple(c.get("name", "") for c in fields_.get("components") or []),
                created=_parse_date(created),
                resolved=_parse_date(fields_["resolutiondate"]) if fields_.get("resolutiondate") else None,
                contributors=int(contributors),
                comments=int(comments),
            ))
        except (CorpusError, ValueError, AttributeError) as exc:
            result.skipped += 1
            result.skipped_rows.append((idx, str(exc)))
    return result


def issue_to_record(issue: IssueReport) -> dict:
    return {
        "project": issue.project,
        "issue_id": issue.issue_id,
        "title": issue.title,
        "description": issue.description,
        "issue_type": issue.issue_type,
        "status": issue.status,
        "components": list(issue.components),
        "created": issue.created.isoformat(),
        "resolved": issue.resolved.isoformat() if issue.resolved else None,
        "contributors": issue.contributors,
        "comments": issue.comments,
        "extras": [list(kv) for kv in issue.extras],
    }


def issue_from_record(record: dict) -> IssueReport:
    return IssueReport(
        project=record["project"],
        issue_id=record["issue_id"],
        title=record["title"],
        description=record.get("description", ""),
        issue_type=record.get("issue_type", "unspecified"),
        status=record.get("status", ""),
        components=tuple(record.get("components", [])),
        created=_parse_date(record["created"]),
        resolved=_parse_date(record["resolved"]) if record.get("resolved") else None,
        contributors=int(record.get("contributors", 1)),
        comments=int(record.get("comments", 0)),
        extras=tuple((k, v) for k, v in record.get("extras", [])),
    )


def emit_canonical(issues: Iterable[IssueReport]) -> str:
    """Serialize issues to the canonical JSON-Lines format."""
    return "".join(json.dumps(issue_to_record(i), ensure_ascii=False, sort_keys=True) + "\n"
                   for i in issues)


def _ingest_canonical(text: str) -> IngestResult:
    result = IngestResult(issues=[])
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            result.issues.append(issue_from_record(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            result.skipped += 1
            result.skipped_rows.append((line_no, str(exc)))
    return result


def ingest(path: str | Path, fmt: str, project: str = "") -> IngestResult:
    """Parse a tracker export into canonical issue records.

    ``fmt`` is one of monorail-csv, jira-json, canonical-json.  Malformed rows
    are skipped and counted, with their row index and reason kept.
    """
    if fmt not in FORMATS:
        raise CorpusError(f"unknown format {fmt!r} (expected one of {', '.join(FORMATS)})")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    project = project or Path(path).stem
    if fmt == "monorail-csv":
        return _ingest_monorail_csv(text, project)
    if fmt == "jira-json":
        return _ingest_jira_json(text, project)
    return _ingest_canonical(text)


def filter_privacy_tagged(issues: Sequence[IssueReport],
                          tag: str = DEFAULT_PRIVACY_TAG,
                          statuses: Iterable[str] = DEFAULT_STATUSES) -> list[IssueReport]:
    """Issues whose components carry the privacy tag and whose status is
    allowed, in stable order.

    Component paths like ``Internals>Network>Cookies`` match on any segment.
    """
    wanted = {s.strip().lower() for s in statuses}
    tag = tag.lower()

    def tagged(issue: IssueReport) -> bool:
        for comp in issue.components:
            segments = [seg.strip().lower() for seg in comp.split(">")]
            if tag in segments:
                return True
        return False

    return [i for i in issues if tagged(i) and i.status.strip().lower() in wanted]


_CODE_FENCE = re.compile(r"```.*?```", re.DOTALL)
# stack-trace-ish lines: frame prefixes, source locations, mangled symbols
_TRACE_LINE = re.compile(
    r"(^\s*(at|#\d+)\s)|(\w+\.(cc|cpp|h|java|py|js|ts):\d+)|(::\w+<)|(\b0x[0-9a-fA-F]{6,}\b)")


def content_tokens(description: str) -> int:
    """Whitespace tokens left after stripping code blocks and
    stack-trace-like lines."""
    stripped = _CODE_FENCE.sub(" ", description or "")
    lines = [ln for ln in stripped.splitlines() if not _TRACE_LINE.search(ln)]
    return len(" ".join(lines).split())


def flag_low_information(issue: IssueReport,
                         min_content_tokens: int = DEFAULT_MIN_CONTENT_TOKENS) -> bool:
    """True when the description carries fewer content tokens than the
    threshold (strict less-than).  A flag to assist manual review, never an
    automatic exclusion."""
    return content_tokens(issue.description) < min_content_tokens


@dataclass(frozen=True)
class MetricStats:
    minimum: float
    maximum: float
    mean: float
    median: float
    mode: float

    @property
    def mean_rounded(self) -> int:
        """Half-up integer rounding, for report parity."""
        return math.floor(self.mean + 0.5)

    def as_row(self) -> tuple:
        return (self.minimum, self.maximum, self.mean_rounded, self.median, self.mode)


@dataclass(frozen=True)
class DescriptiveStats:
    contributors: MetricStats
    resolution_days: MetricStats | None
    comments: MetricStats
    n_issues: int
    n_resolved: int


def _metric(values: Sequence[float]) -> MetricStats:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    median = float(ordered[mid]) if n % 2 else (ordered[mid - 1] + ordered[mid]) / 2
    # mode ties break toward the smallest value so the result is deterministic
    freq = Counter(ordered)
    best = max(freq.values())
    mode = min(v for v, c in freq.items() if c == best)
    return MetricStats(minimum=float(ordered[0]), maximum=float(ordered[-1]),
                       mean=sum(ordered) / n, median=median, mode=float(mode))


def descriptive_stats(issues: Sequence[IssueReport]) -> DescriptiveStats:
    """Min/max/mean/median/mode of contributors, resolution time and comments.

    Resolution time is computed over resolved issues only.
    """
    if not issues:
        raise CorpusError("no issues")
    resolution = [i.resolution_days for i in issues if i.resolution_days is not None]
    return DescriptiveStats(
        contributors=_metric([i.contributors for i in issues]),
        resolution_days=_metric(resolution) if resolution else None,
        comments=_metric([i.comments for i in issues]),
        n_issues=len(issues),
        n_resolved=len(resolution),
    )
