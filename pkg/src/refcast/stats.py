"""Descriptive overrun statistics, Tukey-fence outliers and trend series."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from scipy import stats as _sps

from refcast.dataset import Dataset, OverrunObservation, extract_observations
from refcast.errors import DomainError

Observations = Iterable[Union[OverrunObservation, float]]


def _values(obs: Observations) -> list[float]:
    return [o.value if isinstance(o, OverrunObservation) else float(o) for o in obs]


def median(sorted_values: Sequence[float]) -> float:
    """Median of an already sorted sequence (mean of the two central values for even n)."""
    n = len(sorted_values)
    mid = n // 2
    if n % 2:
        return sorted_values[mid]
    return (sorted_values[mid - 1] + sorted_values[mid]) / 2.0


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    median: float
    min: float
    max: float
    freq_overrun: float


def summarize(obs: Observations) -> SummaryStats:
    values = sorted(_values(obs))
    if not values:
        raise DomainError("cannot summarize an empty set of observations")
    n = len(values)
    return SummaryStats(
        n=n,
        mean=math.fsum(values) / n,
        median=median(values),
        min=values[0],
        max=values[-1],
        freq_overrun=sum(1 for v in values if v > 0) / n,
    )


@dataclass(frozen=True)
class OutlierReport:
    n: int
    lower_hinge: float
    upper_hinge: float
    lower_fence: float
    upper_fence: float
    outlier_ids: tuple[str, ...]
    outlier_values: tuple[float, ...]

    @property
    def outlier_share(self) -> float:
        return len(self.outlier_ids) / self.n


def tukey_hinges(sorted_values: Sequence[float]) -> tuple[float, float]:
    """Lower and upper hinges by median split; for odd n each half keeps the median."""
    n = len(sorted_values)
    half = (n + 1) // 2
    return median(sorted_values[:half]), median(sorted_values[n - half :])


def tukey_fences(obs: Observations, k: float = 1.5) -> OutlierReport:
    """Flag observations at or beyond ``k`` hinge-spreads outside the hinges.

    Plain floats are identified by their position in the input.
    """
    items = list(obs)
    if len(items) < 4:
        raise DomainError("too few observations for fences")
    ids = [
        o.project_id if isinstance(o, OverrunObservation) else str(i)
        for i, o in enumerate(items)
    ]
    values = _values(items)
    lo_h, hi_h = tukey_hinges(sorted(values))
    spread = hi_h - lo_h
    upper = hi_h + k * spread
    lower = lo_h - k * spread
    flagged = [(i, v) for i, v in zip(ids, values) if v >= upper or v <= lower]
    return OutlierReport(
        n=len(values),
        lower_hinge=lo_h,
        upper_hinge=hi_h,
        lower_fence=lower,
        upper_fence=upper,
        outlier_ids=tuple(i for i, _ in flagged),
        outlier_values=tuple(v for _, v in flagged),
    )


@dataclass(frozen=True)
class BlackSwanReport:
    cost: OutlierReport
    schedule: OutlierReport
    joint_ids: tuple[str, ...]

    @property
    def joint_count(self) -> int:
        return len(self.joint_ids)


def classify_black_swans(ds: Dataset) -> BlackSwanReport:
    """Upper-tail outliers per variable and the projects flagged on both.

    Only the upper fence marks a Black Swan; projects below the lower fence
    are kept in the per-variable reports but never counted as joint.
    """
    cost = tukey_fences(extract_observations(ds, "cost"))
    schedule = tukey_fences(extract_observations(ds, "schedule"))
    high_cost = {i for i, v in zip(cost.outlier_ids, cost.outlier_values) if v >= cost.upper_fence}
    joint = tuple(
        i
        for i, v in zip(schedule.outlier_ids, schedule.outlier_values)
        if v >= schedule.upper_fence and i in high_cost
    )
    return BlackSwanReport(cost=cost, schedule=schedule, joint_ids=joint)


@dataclass(frozen=True)
class TrendPoint:
    year: int
    window_mean: float
    ci_low: float
    ci_high: float
    window_n: int


@dataclass(frozen=True)
class TrendSeries:
    points: tuple[TrendPoint, ...]
    window_width: int
    confidence: float


def mean_confidence_interval(values: Sequence[float], confidence: float) -> tuple[float, float, float]:
    """Mean and two-sided Student-t interval; needs at least two values."""
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    if var == 0:
        return mean, mean, mean
    half = _sps.t.ppf(0.5 + confidence / 2.0, n - 1) * math.sqrt(var / n)
    return mean, mean - half, mean + half


def moving_average(
    obs: Observations | Mapping[int, Sequence[float]],
    window_width: int,
    confidence: float = 0.95,
) -> TrendSeries:
    """Centered moving average over decision years with a t-interval band.

    Every calendar year between the first and last observed year is a
    candidate centre; years whose window holds fewer than two observations
    are left out. Observations are weighted equally.
    """
    if window_width < 1 or window_width % 2 == 0:
        raise DomainError("window_width must be an odd integer >= 1")
    if not 0 < confidence < 1:
        raise DomainError("confidence must lie in (0, 1)")
    by_year: dict[int, list[float]] = defaultdict(list)
    if isinstance(obs, Mapping):
        for year, vals in obs.items():
            by_year[int(year)].extend(float(v) for v in vals)
    else:
        for o in obs:
            if not isinstance(o, OverrunObservation):
                raise DomainError("moving_average needs observations carrying decision_year")
            by_year[o.decision_year].append(o.value)
    if not by_year:
        raise DomainError("moving_average needs at least one observation")

    half = window_width // 2
    points = []
    for year in range(min(by_year), max(by_year) + 1):
        window = [v for y in range(year - half, year + half + 1) for v in by_year.get(y, ())]
        if len(window) < 2:
            continue
        mean, lo, hi = mean_confidence_interval(window, confidence)
        points.append(TrendPoint(year, mean, min(lo, mean), max(hi, mean), len(window)))
    return TrendSeries(tuple(points), window_width, confidence)
