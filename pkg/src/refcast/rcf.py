"""Reference class construction, empirical risk curves and uplifts."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from refcast.dataset import Dataset, Variable, extract_observations, filter_dataset
from refcast.errors import DomainError

MIN_RECOMMENDED_CLASS_SIZE = 20


class AdjustmentRefused(DomainError):
    pass


@dataclass(frozen=True)
class ReferenceClass:
    values: tuple[float, ...]
    variable: Variable = "cost"
    provenance: str = ""

    def __post_init__(self) -> None:
        values = tuple(sorted(float(v) for v in self.values))
        if not values:
            raise DomainError("empty reference class")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values: Iterable[float], variable: Variable = "cost", provenance: str = "") -> ReferenceClass:
        return cls(tuple(values), variable, provenance)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def small_sample(self) -> bool:
        return self.n < MIN_RECOMMENDED_CLASS_SIZE

    def to_csv(self) -> str:
        lines = [
            f"# variable: {self.variable}",
            f"# provenance: {self.provenance}",
            f"# n: {self.n}",
            "overrun",
        ]
        lines.extend(repr(v) for v in self.values)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> ReferenceClass:
        meta: dict[str, str] = {}
        values = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition(":")
                meta[key.strip()] = val.strip()
            elif line != "overrun":
                values.append(float(line))
        return cls(tuple(values), meta.get("variable", "cost"), meta.get("provenance", ""))  # type: ignore[arg-type]


def build_reference_class(
    ds: Dataset,
    variable: Variable = "cost",
    sector: str | Iterable[str] | None = None,
    country: str | Iterable[str] | None = None,
    years: tuple[int, int] | None = None,
) -> ReferenceClass:
    sub = filter_dataset(ds, sector=sector, country=country, years=years)
    obs = extract_observations(sub, variable)
    if not obs:
        raise DomainError("empty reference class")
    return ReferenceClass(tuple(o.value for o in obs), variable, sub.source_meta.describe())


def ecdf(rc: ReferenceClass, x: float) -> float:
    """Share of class values at or below ``x``."""
    return bisect.bisect_right(rc.values, x) / rc.n


def _min_count(n: int, certainty: float) -> int:
    # smallest i in 1..n with i / n >= certainty, evaluated in the same float
    # arithmetic ecdf uses so that uplift and ecdf stay exact inverses
    i = min(max(math.ceil(certainty * n), 1), n)
    while i > 1 and (i - 1) / n >= certainty:
        i -= 1
    while i < n and i / n < certainty:
        i += 1
    return i


def quantile(rc: ReferenceClass, certainty: float) -> float:
    """Lower empirical quantile: smallest class value whose ECDF reaches ``certainty``."""
    if not 0 < certainty <= 1:
        raise DomainError(f"certainty must lie in (0, 1], got {certainty!r}")
    return rc.values[_min_count(rc.n, certainty) - 1]


def certainty_for_uplift(rc: ReferenceClass, u: float) -> float:
    return ecdf(rc, u)


@dataclass(frozen=True)
class UpliftResult:
    certainty: float
    uplift: float
    adjusted_uplift: float | None = None
    adjustment_evidence: str = ""
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if (self.adjusted_uplift is None) != (not self.adjustment_evidence):
            raise DomainError("an adjusted uplift must carry its evidence and vice versa")

    @property
    def effective(self) -> float:
        return self.uplift if self.adjusted_uplift is None else self.adjusted_uplift


def uplift(rc: ReferenceClass, certainty: float) -> UpliftResult:
    return UpliftResult(certainty, quantile(rc, certainty))


def adjust_uplift(base: UpliftResult, factor: float, evidence: str) -> UpliftResult:
    """Scale the uplift by ``factor``; refused unless ``evidence`` is given."""
    if not evidence or not evidence.strip():
        raise AdjustmentRefused("adjustment requires hard evidence")
    if not factor > 0:
        raise DomainError(f"adjustment factor must be positive, got {factor!r}")
    notes = base.notes
    if factor < 1:
        notes = notes + (
            "caution: downward adjustment shrinks the outside-view uplift; "
            "check the evidence is not optimism in disguise",
        )
    return UpliftResult(
        certainty=base.certainty,
        uplift=base.uplift,
        adjusted_uplift=factor * base.uplift,
        adjustment_evidence=evidence.strip(),
        notes=notes,
    )


def apply_uplift(base_estimate: float, uplift: float) -> float:
    if not base_estimate > 0:
        raise DomainError(f"base estimate must be positive, got {base_estimate!r}")
    if not uplift > -1:
        raise DomainError(f"uplift must exceed -1, got {uplift!r}")
    return base_estimate * (1.0 + uplift)


def ecdf_curve(rc: ReferenceClass) -> list[tuple[float, float]]:
    """(overrun, cumulative share) at each distinct class value."""
    points = []
    for i, v in enumerate(rc.values):
        if i + 1 < rc.n and rc.values[i + 1] == v:
            continue
        points.append((v, (i + 1) / rc.n))
    return points


def uplift_curve(rc: ReferenceClass, certainties: Sequence[float] | None = None) -> list[tuple[float, float]]:
    """(certainty, uplift) pairs; defaults to every 1% from 1% to 100%."""
    if certainties is None:
        certainties = [i / 100 for i in range(1, 101)]
    return [(p, quantile(rc, p)) for p in certainties]
