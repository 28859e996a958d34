from __future__ import annotations

from datetime import datetime

import pytest
from hypothesis import given
from hypothesis import strategies as st

from privlens.corpus import (
    CorpusError,
    IssueReport,
    content_tokens,
    descriptive_stats,
    emit_canonical,
    filter_privacy_tagged,
    flag_low_information,
    ingest,
    issue_from_record,
    issue_to_record,
    normalize_issue_type,
)


def make_issue(**overrides):
    base = dict(
        project="chrome", issue_id="1", title="t", description="word " * 30,
        issue_type="bug", status="Fixed", components=("Privacy",),
        created=datetime(2019, 1, 1, 9, 0), resolved=datetime(2019, 1, 5, 9, 0),
        contributors=3, comments=4,
    )
    base.update(overrides)
    return IssueReport(**base)


# -- ingestion ------------------------------------------------------------------

def test_ingest_monorail_fixture(chrome_fixture):
    result = ingest(chrome_fixture, "monorail-csv", project="chrome")
    assert len(result.issues) == 10
    assert result.skipped == 0
    by_id = {i.issue_id: i for i in result.issues}
    cookie_bug = by_id["123403"]
    assert cookie_bug.title == "Regression: Can't delete individual cookies"
    assert cookie_bug.issue_type == "bug-regression"
    assert cookie_bug.status == "Fixed"
    assert "Privacy" in cookie_bug.components
    assert cookie_bug.resolution_days == 22
    assert by_id["495226"].resolved is None


def test_ingest_jira_fixture(moodle_fixture):
    result = ingest(moodle_fixture, "jira-json")
    assert len(result.issues) == 4
    by_id = {i.issue_id: i for i in result.issues}
    deletion = by_id["MDL-62904"]
    assert deletion.project == "MDL"
    assert deletion.issue_type == "bug"
    assert deletion.comments == 13
    assert by_id["MDL-61877"].issue_type == "new-feature"


def test_ingest_skips_malformed_rows(tmp_path):
    csv_file = tmp_path / "broken.csv"
    csv_file.write_text(
        "ID,Type,Status,Summary,Opened,Closed,Components,Description\n"
        "1,Bug,Fixed,ok,2019-01-01T00:00:00,2019-01-02T00:00:00,Privacy,fine\n"
        ",Bug,Fixed,missing id,2019-01-01T00:00:00,,Privacy,bad\n"
        "3,Bug,Fixed,bad date,not-a-date,,Privacy,bad\n",
        encoding="utf-8")
    result = ingest(csv_file, "monorail-csv", project="p")
    assert len(result.issues) == 1
    assert result.skipped == 2
    assert [row for row, _ in result.skipped_rows] == [3, 4]


def test_ingest_unknown_format(tmp_path):
    f = tmp_path / "x"
    f.write_text("")
    with pytest.raises(CorpusError):
        ingest(f, "xml")


def test_ingest_missing_file():
    with pytest.raises(CorpusError):
        ingest("/nonexistent/file.csv", "monorail-csv")


def test_ingest_empty_canonical(tmp_path):
    f = tmp_path / "empty.issues"
    f.write_text("")
    result = ingest(f, "canonical-json")
    assert result.issues == [] and result.skipped == 0


def test_monorail_dates_parse():
    record = issue_from_record({
        "project": "p", "issue_id": "1", "title": "t",
        "created": "2019-03-12T10:15:03", "resolved": None,
    })
    assert record.created == datetime(2019, 3, 12, 10, 15, 3)


def test_canonical_round_trip(chrome_fixture, moodle_fixture, tmp_path):
    issues = (ingest(chrome_fixture, "monorail-csv", project="chrome").issues
              + ingest(moodle_fixture, "jira-json").issues)
    out = tmp_path / "corpus.issues"
    out.write_text(emit_canonical(issues), encoding="utf-8")
    again = ingest(out, "canonical-json")
    assert again.skipped == 0
    assert again.issues == issues


@given(st.builds(
    make_issue,
    issue_id=st.text(alphabet="abcdef0123456789", min_size=1, max_size=8),
    title=st.text(min_size=1, max_size=40).filter(lambda s: s.strip()),
    description=st.text(max_size=200),
    contributors=st.integers(min_value=1, max_value=50),
    comments=st.integers(min_value=0, max_value=500),
    components=st.lists(st.sampled_from(["Privacy", "UI", "Internals>Cookies"]),
                        max_size=3).map(tuple),
))
def test_record_round_trip_property(issue):
    assert issue_from_record(issue_to_record(issue)) == issue


# -- invariants -----------------------------------------------------------------

def test_resolution_days_minimum_one():
    same_day = make_issue(resolved=datetime(2019, 1, 1, 12, 0))
    assert same_day.resolution_days == 1
    unresolved = make_issue(resolved=None)
    assert unresolved.resolution_days is None


def test_contributor_floor():
    with pytest.raises(CorpusError):
        make_issue(contributors=0)
    with pytest.raises(CorpusError):
        make_issue(comments=-1)


def test_issue_type_normalization():
    assert normalize_issue_type("Bug-Regression") == "bug-regression"
    assert normalize_issue_type("New Feature") == "new-feature"
    assert normalize_issue_type("Functional Test") == "functional-test"
    assert normalize_issue_type("Weird Thing") == "unspecified"
    assert normalize_issue_type("") == "unspecified"


# -- privacy filter ----------------------------------------------------------------

def test_filter_privacy_tagged(chrome_fixture):
    issues = ingest(chrome_fixture, "monorail-csv", project="chrome").issues
    kept = filter_privacy_tagged(issues)
    ids = {i.issue_id for i in kept}
    assert "123403" in ids and "495226" in ids
    assert "712905" not in ids  # no privacy component
    assert "790330" not in ids  # WontFix status
    # stable order and subset
    assert [i.issue_id for i in kept] == [i.issue_id for i in issues if i in kept]
    assert filter_privacy_tagged(kept) == kept  # idempotent


def test_filter_component_path_segments():
    issue = make_issue(components=("Internals>Network>Privacy",))
    assert filter_privacy_tagged([issue]) == [issue]
    assert filter_privacy_tagged([make_issue(components=("ui",))]) == []


# -- low-information flag --------------------------------------------------------------

def test_mangled_symbol_line_flagged(chrome_fixture):
    issues = ingest(chrome_fixture, "monorail-csv", project="chrome").issues
    crash = next(i for i in issues if i.issue_id == "953622")
    assert flag_low_information(crash)


def test_multi_paragraph_description_not_flagged():
    assert not flag_low_information(make_issue())


def test_threshold_is_strict_less_than():
    exactly_at = make_issue(description=" ".join(["tok"] * 15))
    assert not flag_low_information(exactly_at, min_content_tokens=15)
    below = make_issue(description=" ".join(["tok"] * 14))
    assert flag_low_information(below, min_content_tokens=15)


def test_code_blocks_and_traces_stripped():
    description = "short intro\n```\n" + "code " * 200 + "\n```\n at frame.cc:120\n"
    assert content_tokens(description) == 2


# -- descriptive statistics ---------------------------------------------------------

def test_descriptive_stats_hand_computed():
    issues = [make_issue(issue_id=str(i), contributors=c, comments=0, resolved=None)
              for i, c in enumerate([1, 1, 2, 5])]
    stats = descriptive_stats(issues)
    m = stats.contributors
    assert (m.minimum, m.maximum, m.mean, m.median, m.mode) == (1, 5, 2.25, 1.5, 1)
    assert stats.resolution_days is None
    assert stats.n_resolved == 0


def test_descriptive_stats_single_issue():
    stats = descriptive_stats([make_issue(contributors=7, comments=3)])
    assert (stats.contributors.minimum == stats.contributors.maximum
            == stats.contributors.mean == stats.contributors.median
            == stats.contributors.mode == 7)


def test_descriptive_stats_mode_tie_breaks_small():
    issues = [make_issue(issue_id=str(i), comments=c) for i, c in enumerate([3, 3, 9, 9, 11])]
    assert descriptive_stats(issues).comments.mode == 3


def test_descriptive_stats_mean_rounds_half_up():
    issues = [make_issue(issue_id=str(i), comments=c) for i, c in enumerate([1, 2])]
    assert descriptive_stats(issues).comments.mean == 1.5
    assert descriptive_stats(issues).comments.mean_rounded == 2


def test_descriptive_stats_empty_error():
    with pytest.raises(CorpusError, match="no issues"):
        descriptive_stats([])


def test_descriptive_stats_resolution_only_over_resolved(chrome_fixture):
    issues = ingest(chrome_fixture, "monorail-csv", project="chrome").issues
    stats = descriptive_stats(issues)
    assert stats.n_resolved == sum(1 for i in issues if i.resolved)
    assert stats.resolution_days.minimum >= 1
