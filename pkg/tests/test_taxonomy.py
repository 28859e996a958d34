from __future__ import annotations

import pytest

from privlens.taxonomy import (
    ACTION_VERBS,
    EXPECTED_CATEGORY_COUNTS,
    CategoryMembership,
    CategoryTree,
    NotFoundError,
    RegulationRef,
    Requirement,
    TaxonomyParseError,
    TaxonomyValidationError,
    load_taxonomy,
    parse_seed,
    requirements_by_category,
    trace_issue,
    trace_requirement,
    validate,
)


def test_seed_loads_with_shipped_shape(taxonomy):
    assert len(taxonomy.requirements) == 71
    assert len(taxonomy.tree.categories) == 7
    assert taxonomy.category_counts() == EXPECTED_CATEGORY_COUNTS
    assert sum(taxonomy.category_counts().values()) == 91


def test_every_requirement_has_refs_and_valid_verb(taxonomy):
    for req in taxonomy.requirements:
        assert req.refs, req.id
        assert req.action in ACTION_VERBS
        assert req.object.strip() and req.target.strip()


def test_empty_document_reports_zero_of_71(tmp_path):
    empty = tmp_path / "empty.seed"
    empty.write_text("version=0\n", encoding="utf-8")
    with pytest.raises(TaxonomyValidationError) as err:
        load_taxonomy(empty)
    assert "0 requirements, expected 71" in str(err.value)


def test_duplicate_id_detected(seed_path, tmp_path):
    text = seed_path.read_text(encoding="utf-8")
    r6_line = next(line for line in text.splitlines() if line.startswith("R6\t"))
    broken = tmp_path / "dup.seed"
    broken.write_text(text + r6_line + "\n", encoding="utf-8")
    with pytest.raises(TaxonomyValidationError) as err:
        load_taxonomy(broken)
    assert "duplicate id R6" in str(err.value)


def test_validation_collects_every_violation():
    tree = CategoryTree.default()
    bad = [
        Requirement(id="R1", action="FROB", object="", target="x",
                    categories=frozenset([CategoryMembership("nowhere")]),
                    refs=()),
        Requirement(id="R1", action="ALLOW", object="the data subjects", target="to act",
                    categories=frozenset([CategoryMembership("user-participation")]),
                    refs=(RegulationRef("GDPR", "not a locator"),)),
    ]
    violations = validate(bad, tree, expected_total=2, expected_counts={})
    text = "\n".join(violations)
    assert "duplicate id R1" in text
    assert "not in the closed verb list" in text
    assert "empty object" in text
    assert "no category membership" not in text  # categories present, just unknown
    assert "unknown category nowhere" in text
    assert "no regulation reference" in text
    assert "invalid for source GDPR" in text


def test_malformed_line_reports_location(tmp_path):
    broken = tmp_path / "broken.seed"
    broken.write_text("version=1\nR1\tALLOW\tonly-three\n", encoding="utf-8")
    with pytest.raises(TaxonomyParseError) as err:
        load_taxonomy(broken)
    assert "line 2" in str(err.value)


def test_locator_patterns_accept_quoted_styles():
    good = [("GDPR", "13(2)(c)"), ("GDPR", "14(b)"), ("GDPR", "16"),
            ("ISO29100", "5.2"), ("ThailandPDPA", "19-5"),
            ("APEC", "21-4"), ("APEC", "(21-23)-1")]
    for source, locator in good:
        assert not RegulationRef(source, locator).problems(), (source, locator)
    assert RegulationRef("GDPR", "13)2(").problems()
    assert RegulationRef("CCPA", "1798.100").problems()


def test_requirements_by_category(taxonomy):
    user_participation = requirements_by_category(taxonomy, "user-participation")
    ids = [r.id for r in user_participation]
    assert len(ids) == 9
    assert {"R1", "R44", "R45"} <= set(ids)
    assert ids == sorted(ids, key=lambda r: int(r[1:]))

    assert len(requirements_by_category(taxonomy, "breach")) == 6

    consent = requirements_by_category(taxonomy, "user-desirability", "consent")
    assert len(consent) == 7

    with pytest.raises(NotFoundError):
        requirements_by_category(taxonomy, "unknown-cat")


def test_unknown_subcategory_pair_rejected():
    tree = CategoryTree.default()
    req = Requirement(id="R1", action="ALLOW", object="x", target="y",
                      categories=frozenset([CategoryMembership("breach", "consent")]),
                      refs=(RegulationRef("GDPR", "17(1)"),))
    violations = validate([req], tree, expected_total=1, expected_counts={})
    assert any("unknown category breach/consent" in v for v in violations)


def test_preference_subcategory(taxonomy):
    preference = requirements_by_category(taxonomy, "user-desirability", "preference")
    assert [r.id for r in preference] == ["R8"]


def test_category_multiset_union_is_91(taxonomy):
    total = sum(len(requirements_by_category(taxonomy, c.id))
                for c in taxonomy.tree.categories)
    assert total == 91


def test_trace_requirement_r6_sources(taxonomy):
    refs = trace_requirement(taxonomy, "R6")
    assert set(refs) == {"GDPR", "ISO29100", "ThailandPDPA"}
    assert "APEC" not in refs


def test_trace_requirement_r42_gdpr_duplicate_pair(taxonomy):
    refs = trace_requirement(taxonomy, "R42")
    assert {"14(b)", "15(b)"} <= set(refs["GDPR"])


def test_trace_requirement_unknown_id(taxonomy):
    with pytest.raises(NotFoundError):
        trace_requirement(taxonomy, "R999")


def test_trace_requirement_nonempty_for_whole_seed(taxonomy):
    for req in taxonomy.requirements:
        assert trace_requirement(taxonomy, req.id)


def test_trace_issue_r44_covers_all_four_sources(taxonomy):
    report = trace_issue("123403", ["R44"], taxonomy)
    assert [e.requirement_id for e in report.entries] == ["R44"]
    assert set(report.entries[0].refs) == {"GDPR", "ISO29100", "ThailandPDPA", "APEC"}


def test_trace_issue_empty_labels(taxonomy):
    assert trace_issue("x", [], taxonomy).entries == ()


def test_trace_issue_union_matches_seed_refs(taxonomy):
    # independent oracle: union the two requirements' refs straight from the seed
    expected: dict[str, set[str]] = {}
    for rid in ("R30", "R44"):
        for ref in taxonomy.by_id[rid].refs:
            expected.setdefault(ref.source, set()).add(ref.locator)
    report = trace_issue("MDL-62904", ["R44", "R30"], taxonomy)
    assert len(report.entries) == 2
    assert report.union_refs() == {s: sorted(v) for s, v in expected.items()}


def test_trace_issue_dangling_label(taxonomy):
    with pytest.raises(TaxonomyValidationError) as err:
        trace_issue("x", ["R44", "R999"], taxonomy)
    assert "R999" in str(err.value)


def test_r17_uses_present_per_appendix(taxonomy):
    assert taxonomy.by_id["R17"].action == "PRESENT"


def test_parse_seed_preserves_version(seed_path):
    _reqs, version = parse_seed(seed_path.read_text(encoding="utf-8"))
    assert version == "1.0.0"
