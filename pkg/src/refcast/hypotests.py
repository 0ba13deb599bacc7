"""Nonparametric tests used to compare overrun distributions.

All p-values are two-sided. Small tie-free samples get exact p-values from
full enumeration of the null distribution; everything else falls back to a
tie-corrected normal approximation with continuity correction. The path
taken is recorded in :attr:`TestResult.method`.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Literal, Sequence

from refcast.dataset import (
    VARIABLES,
    Dataset,
    Variable,
    extract_observations,
    filter_dataset,
)
from refcast.errors import DomainError
from refcast.stats import Observations, _values, summarize

Method = Literal["exact_enumeration", "normal_approx"]

RANK_SUM_EXACT_MAX_N = 14
SIGNED_RANK_EXACT_MAX_N = 12
BINOMIAL_TIE_SLACK = 1e-12

STAR_FOOTNOTE = "*** p < 0.001; ** p < 0.01; * p < 0.05"


def significance_stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: Method
    n: int = 0
    n_dropped: int = 0
    ties: bool = False
    two_sided: bool = True

    __test__ = False  # not a pytest class

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise DomainError(f"p-value out of range: {self.p_value!r}")

    @property
    def stars(self) -> str:
        return significance_stars(self.p_value)


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _two_sided_normal(stat: float, mean: float, var: float) -> float:
    if var <= 0:
        return 1.0
    z = (abs(stat - mean) - 0.5) / math.sqrt(var)
    if z <= 0:
        return 1.0
    return min(1.0, 2.0 * _norm_sf(z))


def _two_sided_from_counts(counts: Counter, stat: float, total: int) -> float:
    below = sum(c for s, c in counts.items() if s <= stat)
    above = sum(c for s, c in counts.items() if s >= stat)
    return min(1.0, 2.0 * min(below, above) / total)


def midranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties sharing the mean of their positions."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        r = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = r
        i = j + 1
    return ranks


def _tie_sizes(values: Sequence[float]) -> list[int]:
    return [c for c in Counter(values).values() if c > 1]


def rank_sum_test(
    a: Observations, b: Observations, method: Literal["auto", "exact", "normal"] = "auto"
) -> TestResult:
    """Two-sample Wilcoxon rank-sum (Mann-Whitney) test.

    ``statistic`` is U for sample ``a``: the number of (a, b) pairs with
    a > b, ties counting one half.
    """
    xa, xb = _values(a), _values(b)
    na, nb = len(xa), len(xb)
    if na == 0 or nb == 0:
        raise DomainError("rank_sum_test needs two nonempty samples")
    pooled = xa + xb
    n = na + nb
    ranks = midranks(pooled)
    u = math.fsum(ranks[:na]) - na * (na + 1) / 2.0
    ties = _tie_sizes(pooled)

    use_exact = method == "exact" or (method == "auto" and n <= RANK_SUM_EXACT_MAX_N and not ties)
    if use_exact:
        if ties:
            raise DomainError("exact rank-sum enumeration requires tie-free samples")
        counts: Counter = Counter()
        offset = na * (na + 1) // 2
        for combo in itertools.combinations(range(1, n + 1), na):
            counts[sum(combo) - offset] += 1
        p = _two_sided_from_counts(counts, u, math.comb(n, na))
        return TestResult(u, p, "exact_enumeration", n=n)

    tie_term = sum(t**3 - t for t in ties) / (n * (n - 1)) if n > 1 else 0.0
    var = na * nb / 12.0 * ((n + 1) - tie_term)
    p = _two_sided_normal(u, na * nb / 2.0, var)
    return TestResult(u, p, "normal_approx", n=n, ties=bool(ties))


def signed_rank_test(
    x: Observations, mu0: float = 0.0, method: Literal["auto", "exact", "normal"] = "auto"
) -> TestResult:
    """One-sample Wilcoxon signed-rank test of location ``mu0``.

    Differences equal to zero are dropped before ranking; how many is
    reported in ``n_dropped``. ``statistic`` is W+, the rank sum of the
    positive differences.
    """
    diffs_all = [v - mu0 for v in _values(x)]
    diffs = [d for d in diffs_all if d != 0]
    dropped = len(diffs_all) - len(diffs)
    n = len(diffs)
    if n == 0:
        return TestResult(0.0, 1.0, "exact_enumeration", n=0, n_dropped=dropped)
    absd = [abs(d) for d in diffs]
    ranks = midranks(absd)
    w_plus = math.fsum(r for r, d in zip(ranks, diffs) if d > 0)
    ties = _tie_sizes(absd)

    use_exact = method == "exact" or (method == "auto" and n <= SIGNED_RANK_EXACT_MAX_N and not ties)
    if use_exact:
        if ties:
            raise DomainError("exact signed-rank enumeration requires untied |differences|")
        counts: Counter = Counter()
        for signs in itertools.product((0, 1), repeat=n):
            counts[sum(r for r, s in zip(range(1, n + 1), signs) if s)] += 1
        p = _two_sided_from_counts(counts, w_plus, 2**n)
        return TestResult(w_plus, p, "exact_enumeration", n=n, n_dropped=dropped)

    var = n * (n + 1) * (2 * n + 1) / 24.0 - sum(t**3 - t for t in ties) / 48.0
    p = _two_sided_normal(w_plus, n * (n + 1) / 4.0, var)
    return TestResult(w_plus, p, "normal_approx", n=n, n_dropped=dropped, ties=bool(ties))


def binomial_log_pmf(i: int, n: int, p0: float) -> float:
    if p0 == 0.0:
        return 0.0 if i == 0 else -math.inf
    if p0 == 1.0:
        return 0.0 if i == n else -math.inf
    return (
        math.lgamma(n + 1)
        - math.lgamma(i + 1)
        - math.lgamma(n - i + 1)
        + i * math.log(p0)
        + (n - i) * math.log1p(-p0)
    )


def binomial_test(k: int, n: int, p0: float = 0.5) -> TestResult:
    """Exact two-sided binomial test, minimum-likelihood convention.

    The p-value sums the probabilities of every outcome no more likely than
    the observed one. A relative slack of 1e-12 absorbs rounding when two
    outcomes are equally likely in exact arithmetic.
    """
    if n < 1 or not 0 <= k <= n:
        raise DomainError(f"binomial_test needs 0 <= k <= n and n >= 1, got k={k}, n={n}")
    if not 0.0 <= p0 <= 1.0:
        raise DomainError(f"p0 must lie in [0, 1], got {p0!r}")
    logs = [binomial_log_pmf(i, n, p0) for i in range(n + 1)]
    cutoff = logs[k] + math.log1p(BINOMIAL_TIE_SLACK)
    kept = [lp <= cutoff for lp in logs]
    if all(kept):
        p = 1.0
    else:
        # summing the smaller side keeps p near 1 from drifting below it
        p_in = math.fsum(math.exp(lp) for lp, keep in zip(logs, kept) if keep)
        p_out = math.fsum(math.exp(lp) for lp, keep in zip(logs, kept) if not keep)
        p = p_in if p_in <= p_out else 1.0 - p_out
    return TestResult(float(k), min(1.0, p), "exact_enumeration", n=n)


@dataclass(frozen=True)
class ErrorExplanationRow:
    variable: Variable
    n: int
    mean: float
    signed_rank: TestResult
    freq_overrun: float
    binomial: TestResult


@dataclass(frozen=True)
class ErrorExplanationReport:
    rows: tuple[ErrorExplanationRow, ...]
    notes: tuple[str, ...] = ()


def error_explanation_test(ds: Dataset) -> ErrorExplanationReport:
    """Test whether overruns centre on zero and are as frequent as underruns.

    The binomial leg counts overruns against underruns; observations with
    exactly zero overrun are neither and are left out of its n.
    """
    rows = []
    notes = []
    for variable in VARIABLES:
        obs = extract_observations(ds, variable)
        if not obs:
            notes.append(f"{variable}: no observations, omitted")
            continue
        summary = summarize(obs)
        values = [o.value for o in obs]
        over = sum(1 for v in values if v > 0)
        under = sum(1 for v in values if v < 0)
        if over + under:
            binom = binomial_test(over, over + under, 0.5)
        else:
            binom = TestResult(0.0, 1.0, "exact_enumeration", n=0, n_dropped=len(values))
        if over + under < len(values):
            notes.append(f"{variable}: {len(values) - over - under} zero overrun(s) excluded from tests")
        rows.append(
            ErrorExplanationRow(
                variable=variable,
                n=summary.n,
                mean=summary.mean,
                signed_rank=signed_rank_test(values, 0.0),
                freq_overrun=summary.freq_overrun,
                binomial=binom,
            )
        )
    return ErrorExplanationReport(tuple(rows), tuple(notes))


@dataclass(frozen=True)
class GroupCell:
    """One group's statistics for one variable; ``test`` is None on the baseline row."""

    n: int
    mean: float | None
    freq_overrun: float | None
    test: TestResult | None = None

    @property
    def stars(self) -> str:
        return self.test.stars if self.test is not None else ""


@dataclass(frozen=True)
class GroupRow:
    group: str
    n_records: int
    cells: dict[str, GroupCell] = field(default_factory=dict)
    is_baseline: bool = False


@dataclass(frozen=True)
class ComparisonTable:
    by: str
    baseline: str
    variables: tuple[Variable, ...]
    rows: tuple[GroupRow, ...]
    notes: tuple[str, ...] = ()


REST_LABEL = "rest"


def compare_groups(
    ds: Dataset,
    by: Literal["sector", "country"],
    baseline: str,
    split: bool = False,
    variables: Sequence[Variable] = VARIABLES,
) -> ComparisonTable:
    """Compare each group's overruns against ``baseline`` with rank-sum tests.

    With ``split=True`` the data are cut into two groups only: the baseline
    and everything else (labelled ``"rest"``).
    """
    if by not in ("sector", "country"):
        raise DomainError(f"cannot group by {by!r}")
    labels: list[str] = []
    for rec in ds.records:
        label = getattr(rec, by)
        if label not in labels:
            labels.append(label)
    if baseline not in labels:
        raise DomainError(f"unknown baseline group {baseline!r}")

    if split:
        groups = {
            baseline: filter_dataset(ds, **{by: baseline}),
            REST_LABEL: Dataset(tuple(r for r in ds.records if getattr(r, by) != baseline)),
        }
        if not groups[REST_LABEL].records:
            raise DomainError(f"baseline {baseline!r} is the only group")
    else:
        if len(labels) < 2:
            raise DomainError(f"baseline {baseline!r} is the only group")
        ordered = [baseline] + [lab for lab in labels if lab != baseline]
        groups = {lab: filter_dataset(ds, **{by: lab}) for lab in ordered}

    base_obs = {v: [o.value for o in extract_observations(groups[baseline], v)] for v in variables}
    rows = []
    notes = []
    for label, sub in groups.items():
        cells = {}
        for v in variables:
            values = [o.value for o in extract_observations(sub, v)]
            if not values:
                cells[v] = GroupCell(0, None, None)
                notes.append(f"{label}: no {v} observations")
                continue
            s = summarize(values)
            test = None
            if label != baseline and base_obs[v]:
                test = rank_sum_test(values, base_obs[v])
            cells[v] = GroupCell(s.n, s.mean, s.freq_overrun, test)
        rows.append(GroupRow(label, len(sub.records), cells, label == baseline))
    return ComparisonTable(by, baseline, tuple(variables), tuple(rows), tuple(notes))
