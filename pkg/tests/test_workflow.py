from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from privlens.workflow import (
    ConfigurationError,
    PendingIssuesError,
    SessionStore,
    StaleVersionError,
    StateError,
    UnassignedCoderError,
    WorkflowError,
    assign_issues,
    classify_resolution,
    load_gold,
)

CODERS = ("c1", "c2", "c3")
VALID = {f"R{i}" for i in range(1, 72)}


@pytest.fixture()
def store(tmp_path):
    return SessionStore(tmp_path / "session.journal", valid_labels=VALID)


def start_session(store, issues, sid="s1"):
    store.create_session(sid, "corpus", "1.0.0", CODERS)
    store.assign(sid, issues)
    return sid


def label_all(store, sid, per_issue):
    session = store.sessions[sid]
    for issue, by_coder in per_issue.items():
        for coder in session.assignment[issue]:
            store.submit_labels(sid, coder, issue, by_coder[coder])


# -- assignment -----------------------------------------------------------------

def test_primary_split_four_issues():
    assignment = assign_issues(["i1", "i2", "i3", "i4"], ["A", "B", "C"])
    assert assignment == {
        "i1": ("A", "B"), "i2": ("A", "B"), "i3": ("A", "C"), "i4": ("A", "C")}


def test_primary_split_single_issue():
    assert assign_issues(["i1"], ["A", "B", "C"]) == {"i1": ("A", "B")}


def test_primary_split_odd_count_splits_at_ceiling():
    assignment = assign_issues(["i1", "i2", "i3"], ["A", "B", "C"])
    assert assignment["i2"] == ("A", "B")
    assert assignment["i3"] == ("A", "C")


def test_every_issue_gets_exactly_two_coders():
    assignment = assign_issues([f"i{n}" for n in range(9)], ["A", "B", "C"])
    assert all(len(coders) == 2 for coders in assignment.values())


def test_two_coders_with_default_scheme_rejected():
    with pytest.raises(ConfigurationError):
        assign_issues(["i1"], ["A", "B"])


def test_fewer_than_two_coders_rejected():
    with pytest.raises(ConfigurationError):
        assign_issues(["i1"], ["A"], scheme="k-of-n")


def test_k_of_n_round_robin():
    assignment = assign_issues(["i1", "i2", "i3"], ["A", "B", "C", "D"], scheme="k-of-n", k=2)
    assert assignment == {"i1": ("A", "B"), "i2": ("B", "C"), "i3": ("C", "D")}


def test_empty_corpus_rejected():
    with pytest.raises(ConfigurationError):
        assign_issues([], ["A", "B", "C"])


# -- label submission --------------------------------------------------------------

def test_submit_creates_version_one(store):
    sid = start_session(store, ["123403"])
    record = store.submit_labels(sid, "c1", "123403", {"R44"})
    assert record.version == 1
    assert record.labels == frozenset({"R44"})


def test_submit_multi_label(store):
    sid = start_session(store, ["495226"])
    record = store.submit_labels(sid, "c1", "495226", {"R38", "R39"})
    assert record.labels == frozenset({"R38", "R39"})


def test_empty_label_set_is_legal(store):
    sid = start_session(store, ["i1"])
    record = store.submit_labels(sid, "c1", "i1", set())
    assert record.labels == frozenset()


def test_unassigned_coder_rejected(store):
    sid = start_session(store, ["i1", "i2"])
    # i1 belongs to c1/c2; c3 may not touch it
    with pytest.raises(UnassignedCoderError):
        store.submit_labels(sid, "c3", "i1", {"R44"})


def test_unknown_label_rejected(store):
    sid = start_session(store, ["i1"])
    with pytest.raises(WorkflowError, match="R999"):
        store.submit_labels(sid, "c1", "i1", {"R999"})


def test_history_is_append_only(store):
    sid = start_session(store, ["i1"])
    store.submit_labels(sid, "c1", "i1", {"R44"})
    store.submit_labels(sid, "c1", "i1", {"R44", "R30"})
    session = store.sessions[sid]
    records = session.labels[("i1", "c1")]
    assert [r.version for r in records] == [1, 2]
    assert session.latest("i1", "c1").labels == frozenset({"R30", "R44"})


def test_stale_version_conflict(store):
    sid = start_session(store, ["i1"])
    store.submit_labels(sid, "c1", "i1", {"R44"}, expected_version=0)
    with pytest.raises(StaleVersionError) as err:
        store.submit_labels(sid, "c1", "i1", {"R30"}, expected_version=0)
    assert err.value.retryable
    assert err.value.current_version == 1
    # retry against the current version succeeds
    record = store.submit_labels(sid, "c1", "i1", {"R30"}, expected_version=1)
    assert record.version == 2


# -- disagreements ------------------------------------------------------------------

def test_disagreement_masi_disjoint(store):
    sid = start_session(store, ["527346"])
    store.submit_labels(sid, "c1", "527346", {"R26"})
    store.submit_labels(sid, "c2", "527346", {"R30"})
    disagreements, pending = store.disagreements(sid)
    assert not pending
    assert len(disagreements) == 1
    assert disagreements[0].masi == 1.0


def test_unanimous_issue_not_listed(store):
    sid = start_session(store, ["i1"])
    store.submit_labels(sid, "c1", "i1", {"R44"})
    store.submit_labels(sid, "c2", "i1", {"R44"})
    disagreements, pending = store.disagreements(sid)
    assert disagreements == [] and pending == []


def test_disagreement_masi_subset(store):
    sid = start_session(store, ["i1"])
    store.submit_labels(sid, "c1", "i1", {"R44"})
    store.submit_labels(sid, "c2", "i1", {"R30", "R44"})
    disagreements, _ = store.disagreements(sid)
    assert disagreements[0].masi == 2 / 3


def test_pending_issues_reported(store):
    sid = start_session(store, ["i1", "i2"])
    store.submit_labels(sid, "c1", "i1", {"R44"})
    _, pending = store.disagreements(sid)
    assert set(pending) == {"i1", "i2"}


def test_disagreements_plus_unanimous_partition(store):
    issues = [f"i{n}" for n in range(6)]
    sid = start_session(store, issues)
    session = store.sessions[sid]
    for idx, issue in enumerate(issues):
        first, second = session.assignment[issue]
        store.submit_labels(sid, first, issue, {"R44"})
        store.submit_labels(sid, second, issue, {"R44"} if idx % 2 else {"R30"})
    disagreements, pending = store.disagreements(sid)
    assert not pending
    unanimous = sum(
        1 for issue in issues
        if len(set(store.sessions[sid].latest_sets(issue).values())) == 1)
    assert len(disagreements) + unanimous == len(issues)


# -- adjudication -------------------------------------------------------------------

def adjudication_session(store):
    sid = start_session(store, ["527346"])
    store.submit_labels(sid, "c1", "527346", {"R26"})
    store.submit_labels(sid, "c2", "527346", {"R30"})
    store.begin_adjudication(sid)
    return sid


def test_reclassified_resolution(store):
    sid = adjudication_session(store)
    final = store.adjudicate(sid, "527346", {"R30"}, "reclassified", ["c1", "c2", "c3"])
    assert final.labels == frozenset({"R30"})
    assert final.resolution == "reclassified"


def test_combined_resolution_is_union(store):
    sid = adjudication_session(store)
    final = store.adjudicate(sid, "527346", {"R26", "R30"}, "combined", ["c1", "c2"])
    assert final.resolution == "combined"


def test_unanimous_resolution(store):
    sid = start_session(store, ["i1"])
    store.submit_labels(sid, "c1", "i1", {"R44"})
    store.submit_labels(sid, "c2", "i1", {"R44"})
    store.begin_adjudication(sid)
    final = store.adjudicate(sid, "i1", {"R44"}, "unanimous", ["c1", "c2"])
    assert final.resolution == "unanimous"


def test_resolution_kind_must_match_sets(store):
    sid = adjudication_session(store)
    with pytest.raises(WorkflowError, match="inconsistent"):
        store.adjudicate(sid, "527346", {"R26", "R30"}, "reclassified", ["c1"])
    with pytest.raises(WorkflowError, match="inconsistent"):
        store.adjudicate(sid, "527346", {"R30"}, "combined", ["c1"])
    with pytest.raises(WorkflowError, match="inconsistent"):
        store.adjudicate(sid, "527346", {"R30"}, "unanimous", ["c1"])


def test_adjudication_requires_state(store):
    sid = start_session(store, ["i1"])
    store.submit_labels(sid, "c1", "i1", {"R44"})
    store.submit_labels(sid, "c2", "i1", {"R44"})
    with pytest.raises(StateError):
        store.adjudicate(sid, "i1", {"R44"}, "unanimous", ["c1"])


@given(st.frozensets(st.sampled_from(["R1", "R2", "R3"])),
       st.frozensets(st.sampled_from(["R1", "R2", "R3"])),
       st.frozensets(st.sampled_from(["R1", "R2", "R3"])))
def test_classify_resolution_matches_set_algebra(a, b, final):
    kind = classify_resolution([a, b], final)
    if a == b and final == a:
        assert kind == "unanimous"
    elif a != b and final == a | b:
        assert kind == "combined"
    else:
        assert kind == "reclassified"


# -- agreement ----------------------------------------------------------------------

def test_percent_total_agreement_quarter(store):
    issues = ["i1", "i2", "i3", "i4"]
    sid = start_session(store, issues)
    session = store.sessions[sid]
    for issue in issues:
        first, second = session.assignment[issue]
        store.submit_labels(sid, first, issue, {"R44"})
        store.submit_labels(sid, second, issue, {"R44"} if issue == "i1" else {"R30"})
    assert store.percent_total_agreement(sid) == 0.25


def test_percent_total_agreement_all_equal(store):
    sid = start_session(store, ["i1", "i2"])
    session = store.sessions[sid]
    for issue in ("i1", "i2"):
        for coder in session.assignment[issue]:
            store.submit_labels(sid, coder, issue, {"R44"})
    assert store.percent_total_agreement(sid) == 1.0


def test_percent_total_agreement_pending_error(store):
    sid = start_session(store, ["i1"])
    with pytest.raises(PendingIssuesError):
        store.percent_total_agreement(sid)


# -- finalize + journal replay --------------------------------------------------------

PAPER_EXAMPLES = {
    "123403": {"R44"},
    "495226": {"R38", "R39"},
    "831572": {"R13", "R27", "R39"},
    "MDL-62904": {"R30", "R44"},
}


def test_finalize_gold_dataset(store, tmp_path):
    issues = list(PAPER_EXAMPLES)
    sid = start_session(store, issues)
    session = store.sessions[sid]
    for issue, labels in PAPER_EXAMPLES.items():
        for coder in session.assignment[issue]:
            store.submit_labels(sid, coder, issue, labels)
    store.begin_adjudication(sid)
    assert store.resolve_unanimous(sid, ["c1", "c2", "c3"]) == 4
    gold = store.finalize(sid)
    assert store.sessions[sid].state == "finalized"
    assert gold.labels_by_issue() == {
        issue: tuple(sorted(labels)) for issue, labels in PAPER_EXAMPLES.items()}
    assert all(r.resolution == "unanimous" for r in gold.records)

    out = tmp_path / "gold.labels"
    out.write_text(gold.to_jsonl(), encoding="utf-8")
    assert load_gold(out) == {i: sorted(l) for i, l in PAPER_EXAMPLES.items()}


def test_finalize_lists_pending_issues(store):
    sid = start_session(store, ["i1", "i2"])
    session = store.sessions[sid]
    for coder in session.assignment["i1"]:
        store.submit_labels(sid, coder, "i1", {"R44"})
    store.begin_adjudication(sid)
    store.resolve_unanimous(sid, ["c1"])
    with pytest.raises(PendingIssuesError) as err:
        store.finalize(sid)
    assert "i2" in str(err.value)


def test_submission_rejected_after_finalize(store):
    sid = start_session(store, ["i1"])
    session = store.sessions[sid]
    for coder in session.assignment["i1"]:
        store.submit_labels(sid, coder, "i1", {"R44"})
    store.begin_adjudication(sid)
    store.resolve_unanimous(sid, ["c1"])
    store.finalize(sid)
    with pytest.raises(StateError):
        store.submit_labels(sid, "c1", "i1", {"R30"})


def test_journal_replay_reconstructs_identical_gold(tmp_path):
    journal = tmp_path / "replay.journal"
    store = SessionStore(journal, valid_labels=VALID)
    issues = list(PAPER_EXAMPLES) + ["527346"]
    sid = start_session(store, issues)
    session = store.sessions[sid]
    for issue, labels in PAPER_EXAMPLES.items():
        for coder in session.assignment[issue]:
            store.submit_labels(sid, coder, issue, labels)
    store.submit_labels(sid, *session.assignment["527346"][:1], "527346", {"R26"})
    store.submit_labels(sid, *session.assignment["527346"][1:], "527346", {"R30"})
    store.begin_adjudication(sid)
    store.adjudicate(sid, "527346", {"R30"}, "reclassified", ["c1", "c2", "c3"],
                     note="tray bubble is part of the user interface")
    store.resolve_unanimous(sid, ["c1", "c2", "c3"])
    gold_bytes = store.finalize(sid).to_jsonl().encode()

    replayed = SessionStore(journal, valid_labels=VALID)
    assert replayed.sessions[sid].state == "finalized"
    assert replayed.gold_dataset(sid).to_jsonl().encode() == gold_bytes

    # replaying is idempotent: a third open still matches
    assert SessionStore(journal).gold_dataset(sid).to_jsonl().encode() == gold_bytes


def test_corrupt_journal_detected(tmp_path):
    journal = tmp_path / "bad.journal"
    journal.write_text('{"event": "session-created", "session": "s", "coders": ["a","b"]}\nnot json\n')
    with pytest.raises(WorkflowError, match="corrupt journal"):
        SessionStore(journal)


def test_duplicate_session_id_rejected(store):
    store.create_session("s1", "c", "1.0.0", CODERS)
    with pytest.raises(WorkflowError):
        store.create_session("s1", "c", "1.0.0", CODERS)


def test_state_transitions_are_linear(store):
    sid = start_session(store, ["i1"])
    with pytest.raises(StateError):
        store.finalize(sid)  # open -> finalized is not a legal jump
    store.begin_adjudication(sid)
    with pytest.raises(StateError):
        store.begin_adjudication(sid)
    with pytest.raises(StateError):
        store.assign(sid, ["i2"])  # assignment belongs to the open state


def test_adjudicated_issues_leave_the_queue_view(store):
    sid = adjudication_session(store)
    store.adjudicate(sid, "527346", {"R30"}, "reclassified", ["c1"])
    all_disagreements, _ = store.disagreements(sid)
    queue_view, _ = store.disagreements(sid, unresolved_only=True)
    assert [d.issue_id for d in all_disagreements] == ["527346"]
    assert queue_view == []
