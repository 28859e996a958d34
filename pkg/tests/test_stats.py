from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from privlens.stats import (
    SamplingConfig,
    StatsError,
    coverage_by_category,
    mann_whitney,
    random_sample,
    sample_size,
    top_requirements,
)


# -- sample size -----------------------------------------------------------------

def test_sample_size_published_values():
    assert sample_size(896) == 269
    assert sample_size(478) == 213


def test_sample_size_huge_population():
    assert sample_size(10 ** 9) == 384


def test_sample_size_capped_at_population():
    assert sample_size(10) == 10
    assert sample_size(1) == 1


@given(st.integers(min_value=1, max_value=10 ** 7), st.integers(min_value=1, max_value=10 ** 7))
@settings(max_examples=200)
def test_sample_size_monotone_and_bounded(a, b):
    lo, hi = sorted((a, b))
    assert sample_size(lo) <= sample_size(hi)
    assert sample_size(hi) <= hi


def test_sampling_config_validation():
    with pytest.raises(StatsError):
        sample_size(100, SamplingConfig(confidence=1.2))
    with pytest.raises(StatsError):
        sample_size(100, SamplingConfig(interval=0))
    with pytest.raises(StatsError):
        sample_size(100, SamplingConfig(proportion=0))
    with pytest.raises(StatsError):
        sample_size(0)


# -- random sample -----------------------------------------------------------------

def test_random_sample_full_list_identity():
    items = ["a", "b", "c", "d"]
    assert random_sample(items, 4, seed=3) == items


def test_random_sample_deterministic():
    items = ["a", "b", "c", "d"]
    assert random_sample(items, 2, seed=1) == random_sample(items, 2, seed=1)


def test_random_sample_preserves_corpus_order():
    items = list(range(100))
    picked = random_sample(items, 30, seed=8)
    assert picked == sorted(picked)


def test_random_sample_too_large():
    with pytest.raises(StatsError):
        random_sample([1, 2], 3, seed=0)


def test_random_sample_uniform_frequency():
    # 10,000 seeded draws of 1 item from 4: each frequency within 3 sigma of 1/4
    counts = {i: 0 for i in range(4)}
    for seed in range(10_000):
        counts[random_sample([0, 1, 2, 3], 1, seed=seed)[0]] += 1
    sigma = math.sqrt(0.25 * 0.75 / 10_000)
    for value in counts.values():
        assert abs(value / 10_000 - 0.25) <= 3 * sigma


# -- Mann-Whitney -----------------------------------------------------------------

def u_oracle(x, y):
    """Direct pair counting: wins of x plus half-credit ties."""
    return sum(1.0 if xi > yj else 0.5 if xi == yj else 0.0 for xi in x for yj in y)


def exact_p_oracle(x, y, alternative):
    pooled = list(x) + list(y)
    u_obs = u_oracle(x, y)
    stats = []
    for subset in itertools.combinations(range(len(pooled)), len(x)):
        chosen = set(subset)
        xs = [pooled[i] for i in subset]
        ys = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        stats.append(u_oracle(xs, ys))
    if alternative == "less":
        return sum(1 for u in stats if u <= u_obs + 1e-9) / len(stats)
    return sum(1 for u in stats if u >= u_obs - 1e-9) / len(stats)


def test_identical_samples_symmetric_effect():
    result = mann_whitney([1, 2, 3], [1, 2, 3], "two-sided")
    assert result.cles == 0.5
    assert result.rbc == 0.0


def test_exact_permutation_small_example():
    result = mann_whitney([1, 2], [3, 4], "less")
    assert result.u_statistic == 0
    assert result.cles == 0.0
    assert result.rbc == -1.0
    assert result.method == "exact-permutation"
    assert result.p_value == pytest.approx(1 / 6, abs=1e-15)


def test_exact_p_matches_enumeration_oracle():
    rng = random.Random(17)
    for _ in range(30):
        x = [rng.randint(0, 8) for _ in range(rng.randint(1, 5))]
        y = [rng.randint(0, 8) for _ in range(rng.randint(1, 5))]
        for alt in ("less", "greater"):
            engine = mann_whitney(x, y, alt)
            assert engine.method == "exact-permutation"
            assert engine.p_value == pytest.approx(exact_p_oracle(x, y, alt), abs=1e-12)
            assert engine.u_statistic == pytest.approx(u_oracle(x, y), abs=1e-12)


def test_antisymmetry_on_random_pairs():
    rng = random.Random(23)
    for _ in range(100):
        x = [rng.uniform(0, 10) for _ in range(rng.randint(1, 6))]
        y = [rng.uniform(0, 10) for _ in range(rng.randint(1, 6))]
        forward = mann_whitney(x, y, "less")
        backward = mann_whitney(y, x, "greater")
        assert forward.p_value == pytest.approx(backward.p_value, abs=1e-12)
        assert forward.cles == pytest.approx(1 - backward.cles, abs=1e-12)
        assert forward.rbc == pytest.approx(-backward.rbc, abs=1e-12)


def test_normal_approximation_close_to_exact_on_8_plus_8():
    rng = random.Random(31)
    for _ in range(25):
        pool = rng.sample(range(1000), 16)  # tie-free
        x, y = pool[:8], pool[8:]
        for alt in ("less", "greater"):
            exact = mann_whitney(x, y, alt, exact_limit=16)
            approx = mann_whitney(x, y, alt, exact_limit=0)
            assert exact.method == "exact-permutation"
            assert approx.method == "normal-approximation"
            assert approx.p_value == pytest.approx(exact.p_value, abs=0.01)
        # the two-sided p doubles the one-sided tail, and with it the error
        exact2 = mann_whitney(x, y, "two-sided", exact_limit=16)
        approx2 = mann_whitney(x, y, "two-sided", exact_limit=0)
        assert approx2.p_value == pytest.approx(exact2.p_value, abs=0.02)


def test_large_samples_use_normal_approximation():
    rng = random.Random(37)
    x = [rng.gauss(0, 1) for _ in range(40)]
    y = [rng.gauss(1, 1) for _ in range(45)]
    result = mann_whitney(x, y, "less")
    assert result.method == "normal-approximation"
    assert result.p_value < 0.01
    assert result.cles < 0.5


def test_tie_corrected_variance_used():
    x = [1, 1, 2, 2] * 5
    y = [2, 2, 3, 3] * 5
    result = mann_whitney(x, y, "less")
    assert result.method == "normal-approximation"
    assert 0.0 < result.p_value < 0.05


def test_empty_sample_rejected():
    with pytest.raises(StatsError):
        mann_whitney([], [1], "less")
    with pytest.raises(StatsError):
        mann_whitney([1], [1], "sideways")


def test_render_p_truncates():
    result = mann_whitney(list(range(30)), list(range(100, 130)), "less")
    assert result.render_p() == "<0.001"
    assert 0 < result.p_value < 0.001


# -- coverage ------------------------------------------------------------------------

def test_coverage_two_issue_example(taxonomy):
    gold = {"a": ["R44"], "b": ["R38", "R39"]}
    table = coverage_by_category(gold, taxonomy)
    assert table.percentages["user-participation"] == pytest.approx(50.0)
    assert table.percentages["notice"] == pytest.approx(50.0)
    for category in ("user-desirability", "data-processing", "breach",
                     "complaint-request", "security"):
        assert table.percentages[category] == 0.0


def test_coverage_counts_issue_once_per_category(taxonomy):
    # R38 and R39 are both notice: the issue still counts once
    table = coverage_by_category({"a": ["R38", "R39"]}, taxonomy)
    assert table.counts["notice"] == 1
    assert table.percentages["notice"] == pytest.approx(100.0)


def test_coverage_multi_category_label_counts_everywhere(taxonomy):
    # R6 belongs to user-participation and user-desirability
    table = coverage_by_category({"a": ["R6"]}, taxonomy)
    assert table.percentages["user-participation"] == pytest.approx(100.0)
    assert table.percentages["user-desirability"] == pytest.approx(100.0)


def test_coverage_empty_gold(taxonomy):
    table = coverage_by_category({}, taxonomy)
    assert all(v == 0.0 for v in table.percentages.values())


def test_coverage_reorder_invariant_and_monotone(taxonomy):
    gold = {"a": ["R44"], "b": ["R38", "R39"], "c": ["R60"]}
    reordered = dict(reversed(list(gold.items())))
    assert (coverage_by_category(gold, taxonomy).percentages
            == coverage_by_category(reordered, taxonomy).percentages)
    bigger = dict(gold, unlabeled=[])
    before = coverage_by_category(gold, taxonomy).percentages
    after = coverage_by_category(bigger, taxonomy).percentages
    for category in before:
        assert after[category] <= before[category]


def test_coverage_dangling_label(taxonomy):
    with pytest.raises(StatsError):
        coverage_by_category({"a": ["R999"]}, taxonomy)


# -- rankings -------------------------------------------------------------------------

def test_top_requirements_ranking_and_ties():
    gold = {"i1": ["R30", "R44"], "i2": ["R44"], "i3": ["R60", "R30"], "i4": ["R44"]}
    ranking = top_requirements(gold, 3)
    assert [(r.requirement_id, r.count) for r in ranking] == [("R44", 3), ("R30", 2), ("R60", 1)]


def test_top_requirements_tie_breaks_toward_lower_id():
    gold = {"i1": ["R9"], "i2": ["R10"], "i3": ["R2"]}
    ranking = top_requirements(gold, 3)
    assert [r.requirement_id for r in ranking] == ["R2", "R9", "R10"]


def test_top_requirements_single_issue():
    ranking = top_requirements({"i": ["R44"]}, 5)
    assert [(r.requirement_id, r.count) for r in ranking] == [("R44", 1)]


def test_top_requirements_by_type_breakdown():
    gold = {"i1": ["R44"], "i2": ["R44"], "i3": ["R30"]}
    types = {"i1": "bug", "i2": "feature", "i3": "bug"}
    ranking = top_requirements(gold, 2, issue_types=types)
    assert ranking[0].by_type == {"bug": 1, "feature": 1}
    assert ranking[1].by_type == {"bug": 1}


def test_top_requirements_k_validation():
    with pytest.raises(StatsError):
        top_requirements({}, 0)
