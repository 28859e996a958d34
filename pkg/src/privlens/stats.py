"""Sampling and nonparametric statistics for the corpus analyses.

Covers survey sample sizing with finite-population correction, seeded uniform
sampling, one-sided Wilcoxon rank-sum (Mann-Whitney U) tests with effect
sizes, per-category coverage of the gold dataset, and top-requirement
rankings.

Orientation convention for the U test: U counts wins of the first sample over
the second (ties count one half), so cles = U / (|x| |y|) is the probability
that a random draw from x exceeds a random draw from y, and rbc = 2 cles - 1.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, TypeVar

T = TypeVar("T")

EXACT_LIMIT = 16  # pooled size at or below which the permutation p-value is exact


class StatsError(ValueError):
    """Invalid input to a statistics routine."""


@dataclass(frozen=True)
class SamplingConfig:
    """Survey sampling parameters.

    ``confidence`` is the confidence level as a fraction, ``interval`` the
    margin of error in percentage points, ``proportion`` the assumed response
    proportion.  The default z-score corresponds to a 95% level.
    """

    confidence: float = 0.95
    interval: float = 5.0
    proportion: float = 0.5
    z_score: float = 1.959964

    def validate(self) -> None:
        if not 0 < self.confidence < 1:
            raise StatsError(f"confidence must be in (0, 1), got {self.confidence}")
        if self.interval <= 0:
            raise StatsError(f"interval must be positive, got {self.interval}")
        if not 0 < self.proportion < 1:
            raise StatsError(f"proportion must be in (0, 1), got {self.proportion}")
        if self.z_score <= 0:
            raise StatsError(f"z-score must be positive, got {self.z_score}")


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def sample_size(population: int, cfg: SamplingConfig | None = None) -> int:
    """Required sample size for a finite population.

    ss0 = z^2 p (1-p) / e^2 with e the margin as a fraction, corrected as
    ss0 / (1 + (ss0 - 1) / N), rounded half-up and capped at N.
    """
    cfg = cfg or SamplingConfig()
    cfg.validate()
    if population < 1:
        raise StatsError(f"population must be >= 1, got {population}")
    e = cfg.interval / 100.0
    ss0 = cfg.z_score ** 2 * cfg.proportion * (1 - cfg.proportion) / (e * e)
    ss = ss0 / (1 + (ss0 - 1) / population)
    return min(population, _round_half_up(ss))


def random_sample(items: Sequence[T], n: int, seed: int) -> list[T]:
    """Uniform sample without replacement, returned in original order.

    Deterministic for a given seed.
    """
    if n > len(items):
        raise StatsError(f"cannot sample {n} from {len(items)} items")
    rng = random.Random(seed)
    picked = sorted(rng.sample(range(len(items)), n))
    return [items[i] for i in picked]


def _fractional_ranks(values: Sequence[float]) -> list[float]:
    """Ranks starting at 1; ties share the mean of their rank range."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def _u_statistic(x: Sequence[float], y: Sequence[float]) -> float:
    """Wins of x over y, ties counted one half (via rank sums)."""
    ranks = _fractional_ranks(list(x) + list(y))
    r_x = sum(ranks[: len(x)])
    return r_x - len(x) * (len(x) + 1) / 2


@dataclass(frozen=True)
class TestResult:
    """Mann-Whitney outcome with both effect-size conventions."""

    u_statistic: float
    p_value: float
    alternative: str
    cles: float
    rbc: float
    method: str
    n_x: int
    n_y: int

    def render_p(self) -> str:
        """Table-style p-value: truncated at '<0.001'."""
        return "<0.001" if self.p_value < 0.001 else f"{self.p_value:.3f}"


ALTERNATIVES = ("less", "greater", "two-sided")


def _exact_p(pooled: Sequence[float], n_x: int, u_obs: float, alternative: str) -> float:
    """Enumerate every split of the pooled values into an x-sample of size
    n_x and count the U statistics at or beyond the observed one."""
    idx = range(len(pooled))
    total = 0
    at_most = 0
    at_least = 0
    for subset in itertools.combinations(idx, n_x):
        sub = set(subset)
        xs = [pooled[i] for i in subset]
        ys = [pooled[i] for i in idx if i not in sub]
        u = _u_statistic(xs, ys)
        total += 1
        if u <= u_obs + 1e-9:
            at_most += 1
        if u >= u_obs - 1e-9:
            at_least += 1
    if alternative == "less":
        return at_most / total
    if alternative == "greater":
        return at_least / total
    return min(1.0, 2.0 * min(at_most, at_least) / total)


def _approx_p(pooled: Sequence[float], n_x: int, n_y: int, u_obs: float, alternative: str) -> float:
    """Normal approximation with tie-corrected variance and continuity
    correction."""
    n = n_x + n_y
    mean = n_x * n_y / 2
    tie_counts = Counter(pooled).values()
    tie_term = sum(t ** 3 - t for t in tie_counts)
    variance = n_x * n_y / 12 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0:
        # all pooled values tied: U is exactly its mean under H0
        return 1.0
    sd = math.sqrt(variance)

    def cdf(z: float) -> float:
        return math.erfc(-z / math.sqrt(2)) / 2

    p_less = cdf((u_obs - mean + 0.5) / sd)
    p_greater = 1.0 - cdf((u_obs - mean - 0.5) / sd)
    if alternative == "less":
        return min(1.0, p_less)
    if alternative == "greater":
        return min(1.0, p_greater)
    return min(1.0, 2.0 * min(p_less, p_greater))


def mann_whitney(
    x: Sequence[float],
    y: Sequence[float],
    alternative: str = "two-sided",
    exact_limit: int = EXACT_LIMIT,
) -> TestResult:
    """Wilcoxon rank-sum test of x against y.

    'less' tests whether x tends below y, 'greater' the reverse.  The p-value
    comes from full permutation enumeration when the pooled size is at most
    ``exact_limit``, otherwise from the tie-corrected normal approximation
    with continuity correction.
    """
    if alternative not in ALTERNATIVES:
        raise StatsError(f"alternative must be one of {ALTERNATIVES}, got {alternative!r}")
    if not x or not y:
        raise StatsError("both samples must be non-empty")
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    u = _u_statistic(x, y)
    n_x, n_y = len(x), len(y)
    cles = u / (n_x * n_y)
    rbc = 2 * cles - 1
    pooled = x + y
    if len(pooled) <= exact_limit:
        p = _exact_p(pooled, n_x, u, alternative)
        method = "exact-permutation"
    else:
        p = _approx_p(pooled, n_x, n_y, u, alternative)
        method = "normal-approximation"
    return TestResult(u_statistic=u, p_value=p, alternative=alternative,
                      cles=cles, rbc=rbc, method=method, n_x=n_x, n_y=n_y)


@dataclass(frozen=True)
class CoverageTable:
    """Per-category occurrence percentages over the gold dataset.

    An issue counts toward every category any of its labels belongs to, so
    the percentages can sum above 100.
    """

    percentages: dict[str, float]
    counts: dict[str, int]
    n_issues: int


def coverage_by_category(gold_labels: Mapping[str, Iterable[str]], taxonomy) -> CoverageTable:
    """Percentage of issues carrying at least one label in each category."""
    categories = [c.id for c in taxonomy.tree.categories]
    counts = {c: 0 for c in categories}
    n = 0
    for issue, labels in gold_labels.items():
        n += 1
        hit: set[str] = set()
        for rid in labels:
            req = taxonomy.by_id.get(rid)
            if req is None:
                raise StatsError(f"issue {issue}: label {rid} not in taxonomy")
            hit.update(m.category for m in req.categories)
        for cat in hit:
            counts[cat] += 1
    percentages = {c: (100.0 * counts[c] / n if n else 0.0) for c in categories}
    return CoverageTable(percentages=percentages, counts=counts, n_issues=n)


@dataclass(frozen=True)
class RankedRequirement:
    requirement_id: str
    count: int
    by_type: dict[str, int] = field(default_factory=dict)


def _id_sort_key(rid: str) -> tuple:
    digits = "".join(ch for ch in rid if ch.isdigit())
    return (int(digits) if digits else 0, rid)


def top_requirements(
    gold_labels: Mapping[str, Iterable[str]],
    k: int,
    issue_types: Mapping[str, str] | None = None,
) -> list[RankedRequirement]:
    """Requirements ranked by the number of issues carrying them.

    Ties break toward the lower requirement id.  When ``issue_types`` maps
    issue id -> type, each entry also carries a per-type breakdown.
    """
    if k < 1:
        raise StatsError(f"k must be >= 1, got {k}")
    counts: Counter[str] = Counter()
    by_type: dict[str, Counter[str]] = {}
    for issue, labels in gold_labels.items():
        itype = (issue_types or {}).get(issue, "unspecified")
        for rid in set(labels):
            counts[rid] += 1
            by_type.setdefault(rid, Counter())[itype] += 1
    ranked = sorted(counts, key=lambda rid: (-counts[rid], _id_sort_key(rid)))
    result = []
    for rid in ranked[:k]:
        breakdown = dict(sorted(by_type[rid].items())) if issue_types is not None else {}
        result.append(RankedRequirement(requirement_id=rid, count=counts[rid], by_type=breakdown))
    return result
