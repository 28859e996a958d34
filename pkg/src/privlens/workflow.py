"""Multi-coder annotation sessions over an append-only journal.

A session assigns every issue to at least two coders, captures versioned
label submissions, surfaces disagreements with their MASI distance, records
adjudication outcomes, and finally freezes a gold dataset.  All state lives
in a journal of JSON events; replaying the journal reconstructs the exact
session state, and nothing ever deletes or mutates a prior record.

Concurrency: submissions for different (issue, coder) pairs are independent;
submissions for the same pair serialize through a per-pair version counter.
A submission carrying a stale expected version is rejected with a retryable
conflict.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from .irr import masi_distance

RESOLUTIONS = ("unanimous", "combined", "reclassified")
STATES = ("open", "adjudicating", "finalized")


class WorkflowError(ValueError):
    """Invalid session operation."""


class ConfigurationError(WorkflowError):
    """Bad session or assignment configuration."""


class UnassignedCoderError(WorkflowError):
    """Coder is not assigned to the issue."""


class StateError(WorkflowError):
    """Operation not allowed in the session's current state."""


class StaleVersionError(WorkflowError):
    """Optimistic-concurrency conflict; reload the latest record and retry."""

    retryable = True

    def __init__(self, issue_id: str, coder_id: str, expected: int, current: int):
        super().__init__(
            f"stale version for issue {issue_id} coder {coder_id}: "
            f"submitted against v{expected} but v{current} is current; reload and retry")
        self.current_version = current


class PendingIssuesError(StateError):
    """Issues still missing submissions or final labels."""

    def __init__(self, what: str, issues: Sequence[str]):
        self.issues = list(issues)
        shown = ", ".join(self.issues[:10])
        more = "" if len(self.issues) <= 10 else f" (+{len(self.issues) - 10} more)"
        super().__init__(f"{what}: {shown}{more}")


def assign_issues(issue_ids: Sequence[str], coders: Sequence[str],
                  scheme: str = "primary-split", k: int = 2) -> dict[str, tuple[str, ...]]:
    """Build the issue -> coders assignment map.

    The default scheme takes exactly three coders: the first classifies every
    issue, the second the first half (split at ceil(n/2) in corpus order) and
    the third the rest, so each issue lands with exactly two coders.  The
    alternative ``k-of-n`` scheme hands each issue to k coders round-robin.
    """
    if len(set(coders)) != len(coders):
        raise ConfigurationError("coder ids must be distinct")
    if len(coders) < 2:
        raise ConfigurationError(f"need at least 2 coders, got {len(coders)}")
    if not issue_ids:
        raise ConfigurationError("corpus is empty")
    if scheme == "primary-split":
        if len(coders) != 3:
            raise ConfigurationError(
                f"primary-split scheme takes exactly 3 coders, got {len(coders)}")
        split = math.ceil(len(issue_ids) / 2)
        return {
            issue: (coders[0], coders[1] if idx < split else coders[2])
            for idx, issue in enumerate(issue_ids)
        }
    if scheme == "k-of-n":
        if k < 2:
            raise ConfigurationError(f"k must be >= 2, got {k}")
        if k > len(coders):
            raise ConfigurationError(f"k={k} exceeds the {len(coders)} coders")
        return {
            issue: tuple(coders[(idx + j) % len(coders)] for j in range(k))
            for idx, issue in enumerate(issue_ids)
        }
    raise ConfigurationError(f"unknown assignment scheme {scheme!r}")


@dataclass(frozen=True)
class LabelRecord:
    session_id: str
    issue_id: str
    coder_id: str
    labels: frozenset[str]
    version: int
    submitted_at: str


@dataclass(frozen=True)
class Disagreement:
    issue_id: str
    label_sets: tuple[tuple[str, frozenset[str]], ...]  # (coder, labels) pairs
    masi: float


@dataclass(frozen=True)
class FinalLabel:
    issue_id: str
    labels: frozenset[str]
    resolution: str
    adjudicators: tuple[str, ...]
    note: str = ""


@dataclass(frozen=True)
class GoldRecord:
    project: str
    issue_id: str
    labels: tuple[str, ...]
    resolution: str


@dataclass
class Session:
    id: str
    corpus_ref: str
    taxonomy_version: str
    coders: tuple[str, ...]
    state: str = "open"
    assignment: dict[str, tuple[str, ...]] = field(default_factory=dict)
    labels: dict[tuple[str, str], list[LabelRecord]] = field(default_factory=dict)
    finals: dict[str, FinalLabel] = field(default_factory=dict)

    def latest(self, issue_id: str, coder_id: str) -> LabelRecord | None:
        records = self.labels.get((issue_id, coder_id))
        if not records:
            return None
        return max(records, key=lambda r: (r.version, r.submitted_at))

    def latest_sets(self, issue_id: str) -> dict[str, frozenset[str]] | None:
        """Latest label set per assigned coder, or None while any is pending."""
        sets = {}
        for coder in self.assignment.get(issue_id, ()):
            record = self.latest(issue_id, coder)
            if record is None:
                return None
            sets[coder] = record.labels
        return sets

    def pending_submissions(self) -> list[str]:
        return [issue for issue in self.assignment if self.latest_sets(issue) is None]


def classify_resolution(sets: Iterable[frozenset[str]], final: frozenset[str]) -> str:
    """The resolution kind the set algebra dictates for an adjudication."""
    sets = list(sets)
    union = frozenset().union(*sets) if sets else frozenset()
    all_equal = len(set(sets)) == 1
    if all_equal and final == sets[0]:
        return "unanimous"
    if not all_equal and final == union:
        return "combined"
    return "reclassified"


def _mean_pairwise_masi(sets: Sequence[frozenset[str]]) -> float:
    pairs = [(i, j) for i in range(len(sets)) for j in range(i + 1, len(sets))]
    return sum(masi_distance(sets[i], sets[j]) for i, j in pairs) / len(pairs)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SessionStore:
    """Journaled store for annotation sessions.

    Every mutation appends one JSON event to the journal and applies it to
    the in-memory state through the same code path used when replaying the
    journal on open, so a restart reconstructs identical state.
    """

    def __init__(self, journal_path: str | Path, valid_labels: Iterable[str] | None = None):
        self.journal_path = Path(journal_path)
        self.valid_labels = frozenset(valid_labels) if valid_labels is not None else None
        self.sessions: dict[str, Session] = {}
        self.issue_meta: dict[str, dict] = {}
        self._lock = threading.Lock()
        if self.journal_path.exists():
            self._replay()

    # -- journal plumbing ---------------------------------------------------

    def _replay(self) -> None:
        for line_no, line in enumerate(self.journal_path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError as exc:
                raise WorkflowError(f"corrupt journal at line {line_no}: {exc}") from exc
            self._apply(event)

    def _append(self, event: dict) -> None:
        self._apply(event)
        self.journal_path.parent.mkdir(parents=True, exist_ok=True)
        with self.journal_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True, ensure_ascii=False) + "\n")
            fh.flush()

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        if kind == "session-created":
            sid = event["session"]
            self.sessions[sid] = Session(
                id=sid,
                corpus_ref=event.get("corpus_ref", ""),
                taxonomy_version=event.get("taxonomy_version", ""),
                coders=tuple(event["coders"]),
            )
        elif kind == "assigned":
            session = self.sessions[event["session"]]
            session.assignment = {issue: tuple(coders)
                                  for issue, coders in event["assignment"].items()}
        elif kind == "labels-submitted":
            session = self.sessions[event["session"]]
            record = LabelRecord(
                session_id=event["session"],
                issue_id=event["issue"],
                coder_id=event["coder"],
                labels=frozenset(event["labels"]),
                version=event["version"],
                submitted_at=event["submitted_at"],
            )
            session.labels.setdefault((record.issue_id, record.coder_id), []).append(record)
        elif kind == "state-changed":
            self.sessions[event["session"]].state = event["state"]
        elif kind == "adjudicated":
            session = self.sessions[event["session"]]
            session.finals[event["issue"]] = FinalLabel(
                issue_id=event["issue"],
                labels=frozenset(event["labels"]),
                resolution=event["resolution"],
                adjudicators=tuple(event.get("adjudicators", ())),
                note=event.get("note", ""),
            )
        else:
            raise WorkflowError(f"unknown journal event {kind!r}")

    # -- session operations -------------------------------------------------

    def _session(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise WorkflowError(f"unknown session {session_id!r}") from None

    def set_issue_metadata(self, issues: Iterable) -> None:
        """Attach corpus metadata (project, issue type) used by exports."""
        for issue in issues:
            self.issue_meta[issue.issue_id] = {
                "project": issue.project,
                "issue_type": issue.issue_type,
            }

    def create_session(self, session_id: str, corpus_ref: str, taxonomy_version: str,
                       coders: Sequence[str]) -> Session:
        with self._lock:
            if session_id in self.sessions:
                raise WorkflowError(f"session {session_id!r} already exists")
            if len(coders) < 2:
                raise ConfigurationError(f"need at least 2 coders, got {len(coders)}")
            self._append({"event": "session-created", "session": session_id,
                          "corpus_ref": corpus_ref, "taxonomy_version": taxonomy_version,
                          "coders": list(coders)})
            return self._session(session_id)

    def assign(self, session_id: str, issue_ids: Sequence[str],
               scheme: str = "primary-split", k: int = 2) -> dict[str, tuple[str, ...]]:
        with self._lock:
            session = self._session(session_id)
            if session.state != "open":
                raise StateError(f"session {session_id} is {session.state}, not open")
            assignment = assign_issues(issue_ids, session.coders, scheme=scheme, k=k)
            self._append({"event": "assigned", "session": session_id, "scheme": scheme,
                          "assignment": {i: list(c) for i, c in assignment.items()}})
            return assignment

    def submit_labels(self, session_id: str, coder_id: str, issue_id: str,
                      labels: Iterable[str], expected_version: int | None = None,
                      submitted_at: str | None = None) -> LabelRecord:
        """Store a new label-record version (append-only).

        ``expected_version`` is the version the client last saw (0 for none);
        a mismatch raises StaleVersionError so the client can reload and
        retry.
        """
        labels = frozenset(labels)
        with self._lock:
            session = self._session(session_id)
            if session.state == "finalized":
                raise StateError(f"session {session_id} is finalized")
            if issue_id not in session.assignment:
                raise WorkflowError(f"issue {issue_id!r} is not part of session {session_id}")
            if coder_id not in session.assignment[issue_id]:
                raise UnassignedCoderError(
                    f"coder {coder_id!r} is not assigned to issue {issue_id}")
            if self.valid_labels is not None:
                unknown = sorted(labels - self.valid_labels)
                if unknown:
                    raise WorkflowError(
                        f"labels not in taxonomy version {session.taxonomy_version}: "
                        + ", ".join(unknown))
            current = session.latest(issue_id, coder_id)
            current_version = current.version if current else 0
            if expected_version is not None and expected_version != current_version:
                raise StaleVersionError(issue_id, coder_id, expected_version, current_version)
            self._append({"event": "labels-submitted", "session": session_id,
                          "issue": issue_id, "coder": coder_id,
                          "labels": sorted(labels), "version": current_version + 1,
                          "submitted_at": submitted_at or _now()})
            return session.latest(issue_id, coder_id)

    def disagreements(self, session_id: str,
                      unresolved_only: bool = False) -> tuple[list[Disagreement], list[str]]:
        """Disagreements over fully-labeled issues plus the pending issues.

        An issue disagrees when its assigned coders' latest sets are not all
        equal; the MASI distance between the sets rides along (mean over
        coder pairs when more than two coders are assigned).  With
        ``unresolved_only`` issues that already carry a final label drop out,
        which is the adjudication-queue view.
        """
        session = self._session(session_id)
        out: list[Disagreement] = []
        pending: list[str] = []
        for issue in session.assignment:
            sets = session.latest_sets(issue)
            if sets is None:
                pending.append(issue)
                continue
            if unresolved_only and issue in session.finals:
                continue
            values = list(sets.values())
            if len(set(values)) > 1:
                out.append(Disagreement(
                    issue_id=issue,
                    label_sets=tuple(sorted(sets.items())),
                    masi=_mean_pairwise_masi(values),
                ))
        return out, pending

    def begin_adjudication(self, session_id: str) -> None:
        with self._lock:
            session = self._session(session_id)
            if session.state != "open":
                raise StateError(f"session {session_id} is {session.state}, not open")
            self._append({"event": "state-changed", "session": session_id,
                          "state": "adjudicating"})

    def adjudicate(self, session_id: str, issue_id: str, final: Iterable[str],
                   resolution: str, adjudicators: Sequence[str], note: str = "") -> FinalLabel:
        """Record the final label set for one issue.

        The stated resolution kind must match what the coders' sets dictate:
        unanimous means all sets were equal and kept, combined means the final
        set is exactly their union, anything else is a reclassification.
        """
        final = frozenset(final)
        with self._lock:
            session = self._session(session_id)
            if session.state != "adjudicating":
                raise StateError(f"session {session_id} is {session.state}, not adjudicating")
            if issue_id not in session.assignment:
                raise WorkflowError(f"issue {issue_id!r} is not part of session {session_id}")
            sets = session.latest_sets(issue_id)
            if sets is None:
                raise PendingIssuesError("cannot adjudicate before all coders submit", [issue_id])
            if resolution not in RESOLUTIONS:
                raise WorkflowError(f"unknown resolution kind {resolution!r}")
            if self.valid_labels is not None:
                unknown = sorted(final - self.valid_labels)
                if unknown:
                    raise WorkflowError("final labels not in taxonomy: " + ", ".join(unknown))
            expected = classify_resolution(sets.values(), final)
            if resolution != expected:
                raise WorkflowError(
                    f"resolution {resolution!r} inconsistent with coder sets: "
                    f"expected {expected!r}")
            self._append({"event": "adjudicated", "session": session_id, "issue": issue_id,
                          "labels": sorted(final), "resolution": resolution,
                          "adjudicators": list(adjudicators), "note": note})
            return session.finals[issue_id]

    def resolve_unanimous(self, session_id: str, adjudicators: Sequence[str]) -> int:
        """Bulk-confirm every fully-labeled unanimous issue without a final
        label yet.  Returns how many were confirmed."""
        session = self._session(session_id)
        count = 0
        for issue in list(session.assignment):
            if issue in session.finals:
                continue
            sets = session.latest_sets(issue)
            if sets is None:
                continue
            values = list(sets.values())
            if len(set(values)) == 1:
                self.adjudicate(session_id, issue, values[0], "unanimous", adjudicators)
                count += 1
        return count

    def percent_total_agreement(self, session_id: str) -> float:
        """Fraction of issues whose assigned coders submitted exactly equal
        sets.  Errors while submissions are pending."""
        session = self._session(session_id)
        pending = session.pending_submissions()
        if pending:
            raise PendingIssuesError("submissions pending", pending)
        if not session.assignment:
            raise WorkflowError("session has no assigned issues")
        agreed = sum(
            1 for issue in session.assignment
            if len(set(session.latest_sets(issue).values())) == 1)
        return agreed / len(session.assignment)

    def labels_by_coder(self, session_id: str) -> dict[str, dict[str, frozenset[str]]]:
        """coder -> issue -> latest label set, for reliability computations."""
        session = self._session(session_id)
        out: dict[str, dict[str, frozenset[str]]] = {}
        for (issue, coder), _records in session.labels.items():
            record = session.latest(issue, coder)
            if record is not None:
                out.setdefault(coder, {})[issue] = record.labels
        return out

    def finalize(self, session_id: str) -> "GoldDataset":
        """Freeze the session and emit the gold dataset plus audit trail."""
        with self._lock:
            session = self._session(session_id)
            if session.state != "adjudicating":
                raise StateError(
                    f"session {session_id} is {session.state}; finalizing requires adjudicating")
            missing = [issue for issue in session.assignment if issue not in session.finals]
            if missing:
                raise PendingIssuesError("issues without a final label", sorted(missing))
            self._append({"event": "state-changed", "session": session_id,
                          "state": "finalized"})
            return self.gold_dataset(session_id)

    def gold_dataset(self, session_id: str) -> "GoldDataset":
        session = self._session(session_id)
        records = []
        for issue in sorted(session.finals):
            final = session.finals[issue]
            meta = self.issue_meta.get(issue, {})
            records.append(GoldRecord(
                project=meta.get("project", ""),
                issue_id=issue,
                labels=tuple(sorted(final.labels)),
                resolution=final.resolution,
            ))
        history = [r for records_ in session.labels.values() for r in records_]
        history.sort(key=lambda r: (r.issue_id, r.coder_id, r.version))
        return GoldDataset(session_id=session_id, records=tuple(records), history=tuple(history))


@dataclass(frozen=True)
class GoldDataset:
    session_id: str
    records: tuple[GoldRecord, ...]
    history: tuple[LabelRecord, ...] = ()

    def labels_by_issue(self) -> dict[str, tuple[str, ...]]:
        return {r.issue_id: r.labels for r in self.records}

    def to_jsonl(self) -> str:
        """Canonical export: one sorted-key JSON record per issue, sorted by
        (project, issue id) so reruns are byte-identical."""
        lines = []
        for record in sorted(self.records, key=lambda r: (r.project, r.issue_id)):
            lines.append(json.dumps({
                "project": record.project,
                "issue_id": record.issue_id,
                "labels": list(record.labels),
                "resolution": record.resolution,
            }, sort_keys=True, ensure_ascii=False))
        return "\n".join(lines) + ("\n" if lines else "")


def load_gold(path: str | Path) -> dict[str, list[str]]:
    """Read a gold export back into issue -> labels."""
    out: dict[str, list[str]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        out[record["issue_id"]] = list(record["labels"])
    return out
