"""Inter-rater reliability metrics for multi-coder annotation.

Three measures are provided:

- MASI distance between two label sets (Jaccard scaled by a set-monotonicity
  weight), used to compare multi-label annotations.
- Fleiss' kappa for a fixed number of coders assigning items to exclusive
  categories (used for requirement-or-not judgments on regulation statements).
- Krippendorff's alpha generalised over a pluggable distance function, so the
  same engine computes nominal, Jaccard and MASI agreement.

Empty label sets are legal annotations (a coder judging an issue out of scope),
not missing data.  Units with fewer than two labelings cannot contribute to
alpha and are skipped but counted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, FrozenSet, Iterable, Sequence

LabelSet = FrozenSet[str]

Distance = Callable[[LabelSet, LabelSet], float]


class IrrError(ValueError):
    """Invalid input to a reliability computation."""


def _as_set(labels: Iterable[str]) -> LabelSet:
    return frozenset(labels)


def masi_distance(a: Iterable[str], b: Iterable[str]) -> float:
    """Distance between two label sets: 1 - Jaccard * monotonicity.

    Monotonicity is 1 for equal sets, 2/3 when one is a strict subset of the
    other, 1/3 when the sets overlap with neither containing the other, and 0
    for disjoint sets.  Two empty sets are equal (distance 0); an empty set
    against a non-empty one counts as disjoint (distance 1).  Computed in exact
    rational arithmetic so e.g. d({R44}, {R30, R44}) is exactly 2/3.
    """
    sa, sb = _as_set(a), _as_set(b)
    if sa == sb:
        return 0.0
    if not sa or not sb:
        return 1.0
    inter = len(sa & sb)
    union = len(sa | sb)
    jaccard = Fraction(inter, union)
    if sa < sb or sb < sa:
        mono = Fraction(2, 3)
    elif inter:
        mono = Fraction(1, 3)
    else:
        mono = Fraction(0)
    return float(1 - jaccard * mono)


def jaccard_distance(a: Iterable[str], b: Iterable[str]) -> float:
    """1 - |a n b| / |a u b|, with two empty sets at distance 0."""
    sa, sb = _as_set(a), _as_set(b)
    if not sa and not sb:
        return 0.0
    return float(1 - Fraction(len(sa & sb), len(sa | sb)))


def nominal_distance(a: Iterable[str], b: Iterable[str]) -> float:
    """0 when the sets are identical, 1 otherwise."""
    return 0.0 if _as_set(a) == _as_set(b) else 1.0


DISTANCES: dict[str, Distance] = {
    "masi": masi_distance,
    "jaccard": jaccard_distance,
    "nominal": nominal_distance,
}


@dataclass(frozen=True)
class ReliabilityResult:
    """Outcome of a reliability computation.

    ``degenerate`` marks inputs where chance disagreement is zero (all ratings
    identical); the value is then reported as 1.0 by convention rather than
    raising, so pipelines survive unanimous fixtures.
    """

    statistic: str
    value: float
    n_units: int
    n_skipped: int = 0
    degenerate: bool = False

    def __post_init__(self):
        if not self.degenerate and not -1.0 - 1e-12 <= self.value <= 1.0 + 1e-12:
            raise IrrError(f"{self.statistic} out of bounds: {self.value}")


@dataclass(frozen=True)
class RatingsMatrix:
    """Counts n[i][j] of coders assigning item i to category j.

    Every row must sum to the same number of coders m, with m >= 2 and at
    least two categories.
    """

    counts: tuple[tuple[int, ...], ...]
    coders_per_item: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], coders_per_item: int | None = None) -> "RatingsMatrix":
        if not rows:
            raise IrrError("ratings matrix has no items")
        counts = tuple(tuple(int(c) for c in row) for row in rows)
        m = coders_per_item if coders_per_item is not None else sum(counts[0])
        problems = []
        k = len(counts[0])
        if k < 2:
            problems.append("matrix needs at least 2 categories")
        if m < 2:
            problems.append("matrix needs at least 2 coders per item")
        for i, row in enumerate(counts):
            if len(row) != k:
                problems.append(f"row {i} has {len(row)} columns, expected {k}")
            if any(c < 0 for c in row):
                problems.append(f"row {i} has a negative count")
            if sum(row) != m:
                problems.append(f"row {i} sums to {sum(row)}, expected {m}")
        if problems:
            raise IrrError("; ".join(problems))
        return cls(counts=counts, coders_per_item=m)

    @property
    def n_items(self) -> int:
        return len(self.counts)

    @property
    def n_categories(self) -> int:
        return len(self.counts[0])


def fleiss_kappa(matrix: RatingsMatrix) -> ReliabilityResult:
    """Fleiss' kappa over a ratings matrix.

    kappa = (P_bar - Pe_bar) / (1 - Pe_bar) where the per-item agreement is
    (sum_j n_ij^2 - m) / (m (m - 1)) and Pe_bar is the sum of squared category
    proportions.  A matrix where every rating falls in one category has
    Pe_bar = 1; it is reported as value 1.0 with the degenerate flag.
    """
    n = matrix.n_items
    m = matrix.coders_per_item
    p_item = [(sum(c * c for c in row) - m) / (m * (m - 1)) for row in matrix.counts]
    p_bar = sum(p_item) / n
    total = n * m
    p_j = [sum(row[j] for row in matrix.counts) / total for j in range(matrix.n_categories)]
    pe_bar = sum(p * p for p in p_j)
    if abs(1.0 - pe_bar) < 1e-15:
        return ReliabilityResult("fleiss-kappa", 1.0, n_units=n, degenerate=True)
    value = (p_bar - pe_bar) / (1.0 - pe_bar)
    return ReliabilityResult("fleiss-kappa", value, n_units=n)


def parse_matrix_file(text: str) -> RatingsMatrix:
    """Parse the matrix file format: a header line ``m=<coders>`` followed by
    one whitespace-separated row of category counts per item.  ``#`` starts a
    comment."""
    m = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m is None:
            if not line.startswith("m="):
                raise IrrError(f"line {lineno}: expected header 'm=<coders>', got {line!r}")
            m = int(line[2:])
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise IrrError(f"line {lineno}: {exc}") from exc
    if m is None:
        raise IrrError("matrix file missing 'm=' header")
    return RatingsMatrix.from_rows(rows, coders_per_item=m)


# A unit is (unit_id, [(coder_id, label_set), ...]).
Labeling = tuple[str, LabelSet]
Unit = tuple[str, list[Labeling]]


def _prepare_units(units: Sequence[Unit]) -> tuple[list[list[LabelSet]], int]:
    included: list[list[LabelSet]] = []
    skipped = 0
    for _unit_id, labelings in units:
        sets = [_as_set(labels) for _coder, labels in labelings]
        if len(sets) < 2:
            skipped += 1
            continue
        included.append(sets)
    return included, skipped


def krippendorff_alpha(units: Sequence[Unit], distance: Distance = masi_distance) -> ReliabilityResult:
    """Krippendorff's alpha, 1 - observed/expected disagreement.

    Observed disagreement pairs every labeling with every other labeling of
    the same unit, weighting each unit's ordered pairs by 1/(m_u - 1) and
    dividing by the number of pairable labelings n.  Expected disagreement
    averages the distance over all ordered pairs of labelings pooled across
    units, i.e. it divides by n(n - 1).  When the pooled labelings are all
    identical the expected disagreement is 0 and the result is 1.0 with the
    degenerate flag.
    """
    included, skipped = _prepare_units(units)
    if not included:
        raise IrrError("no comparable units: every unit has fewer than 2 labelings")
    pooled: list[LabelSet] = [s for sets in included for s in sets]
    n = len(pooled)

    d_obs = 0.0
    for sets in included:
        m_u = len(sets)
        within = sum(distance(sets[i], sets[j]) for i in range(m_u) for j in range(i + 1, m_u))
        d_obs += 2.0 * within / (m_u - 1)
    d_obs /= n

    d_exp = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d_exp += distance(pooled[i], pooled[j])
    d_exp = 2.0 * d_exp / (n * (n - 1))

    if d_exp == 0.0:
        return ReliabilityResult("krippendorff-alpha", 1.0, n_units=len(included),
                                 n_skipped=skipped, degenerate=True)
    value = 1.0 - d_obs / d_exp
    return ReliabilityResult("krippendorff-alpha", value, n_units=len(included), n_skipped=skipped)


def pairwise_alpha(
    labels_by_coder: dict[str, dict[str, Iterable[str]]],
    coder_a: str,
    coder_b: str,
    distance: Distance = masi_distance,
) -> ReliabilityResult:
    """Alpha restricted to the issues labeled by both coders.

    ``labels_by_coder`` maps coder id -> issue id -> label set (latest version
    per coder).
    """
    for coder in (coder_a, coder_b):
        if coder not in labels_by_coder:
            raise IrrError(f"no labels recorded for coder {coder!r}")
    common = sorted(set(labels_by_coder[coder_a]) & set(labels_by_coder[coder_b]))
    if not common:
        raise IrrError(f"coders {coder_a!r} and {coder_b!r} share no labeled issues")
    units: list[Unit] = [
        (issue, [(coder_a, _as_set(labels_by_coder[coder_a][issue])),
                 (coder_b, _as_set(labels_by_coder[coder_b][issue]))])
        for issue in common
    ]
    return krippendorff_alpha(units, distance)


@dataclass(frozen=True)
class BootstrapInterval:
    low: float
    high: float
    level: float
    iterations: int
    point: float
    samples: tuple[float, ...] = field(repr=False, default=())


def bootstrap_alpha(
    units: Sequence[Unit],
    distance: Distance = masi_distance,
    iterations: int = 1000,
    seed: int = 0,
    level: float = 0.95,
) -> BootstrapInterval:
    """Percentile bootstrap interval for alpha, resampling units with
    replacement.  Deterministic for a given seed; degenerate replicates count
    as alpha = 1."""
    if not 0 < level < 1:
        raise IrrError("confidence level must be in (0, 1)")
    point = krippendorff_alpha(units, distance).value
    rng = random.Random(seed)
    usable = [u for u in units if len(u[1]) >= 2]
    values = []
    for _ in range(iterations):
        resample = [usable[rng.randrange(len(usable))] for _ in usable]
        values.append(krippendorff_alpha(resample, distance).value)
    values.sort()
    lo_idx = int((1 - level) / 2 * (len(values) - 1))
    hi_idx = int((1 + level) / 2 * (len(values) - 1))
    return BootstrapInterval(low=values[lo_idx], high=values[hi_idx], level=level,
                             iterations=iterations, point=point, samples=tuple(values))
