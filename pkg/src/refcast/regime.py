"""Tiered contingency regimes and pain/gain settlement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from refcast.errors import DomainError
from refcast.rcf import ReferenceClass, apply_uplift, quantile


@dataclass(frozen=True)
class TierSpec:
    name: str
    p_level: float
    owner: str = ""

    def __post_init__(self) -> None:
        if not 0 < self.p_level <= 1:
            raise DomainError(f"tier {self.name!r}: p_level must lie in (0, 1]")


DEFAULT_TIERS = (
    TierSpec("contract", 0.30, "contract manager"),
    TierSpec("project", 0.50, "project manager"),
    TierSpec("funder", 0.80, "project funder"),
)


def check_tiers(tiers: Sequence[TierSpec]) -> None:
    if not tiers:
        raise DomainError("a regime needs at least one tier")
    for prev, cur in zip(tiers, tiers[1:]):
        if not cur.p_level > prev.p_level:
            raise DomainError("tier p_levels must be strictly increasing")


@dataclass(frozen=True)
class Tier:
    spec: TierSpec
    uplift: float
    cumulative_budget: float
    tranche: float


@dataclass(frozen=True)
class ContingencyRegime:
    base_estimate: float
    tiers: tuple[Tier, ...]

    @property
    def total_funded(self) -> float:
        return self.tiers[-1].cumulative_budget


def build_regime(
    rc: ReferenceClass, base_estimate: float, tiers: Sequence[TierSpec] = DEFAULT_TIERS
) -> ContingencyRegime:
    """Anchor each tier's cumulative budget at its P-level uplift.

    Negative uplifts are clamped so no tier funds less than the base estimate.
    """
    check_tiers(tiers)
    if not base_estimate > 0:
        raise DomainError("base estimate must be positive")
    built = []
    prev = base_estimate
    for spec in tiers:
        u = max(0.0, quantile(rc, spec.p_level))
        budget = apply_uplift(base_estimate, u)
        built.append(Tier(spec, u, budget, budget - prev))
        prev = budget
    return ContingencyRegime(base_estimate, tuple(built))


@dataclass(frozen=True)
class Allocation:
    actual_cost: float
    base_spent: float
    spends: tuple[tuple[str, float], ...]
    breach: bool
    excess: float


def allocate_outturn(regime: ContingencyRegime, actual_cost: float) -> Allocation:
    """Absorb ``actual_cost`` into the base estimate, then tier by tier."""
    if not actual_cost > 0:
        raise DomainError("actual cost must be positive")
    base_spent = min(actual_cost, regime.base_estimate)
    amounts = []
    prev = regime.base_estimate
    for tier in regime.tiers:
        level = min(max(actual_cost, prev), tier.cumulative_budget)
        amounts.append(level - prev)
        prev = tier.cumulative_budget
    breach = actual_cost > regime.total_funded
    drawn = [i for i, a in enumerate(amounts) if a > 0]
    if drawn and not breach:
        _book_residue(actual_cost, base_spent, amounts, drawn)
    spends = [(tier.spec.name, a) for tier, a in zip(regime.tiers, amounts)]
    excess = actual_cost - regime.total_funded if breach else 0.0
    return Allocation(actual_cost, base_spent, tuple(spends), breach, excess)


def _book_residue(actual: float, base_spent: float, amounts: list[float], drawn: list[int]) -> None:
    """Nudge drawn spends by single ulps until their correctly rounded sum is ``actual``.

    The last drawn tranche absorbs the residue first. When the exact sum sits
    on a rounding tie its ulp steps only hop between ties, so a smaller drawn
    spend with a finer ulp takes over.
    """
    order = [drawn[-1], *sorted(drawn[:-1], key=lambda i: amounts[i])]
    for i in order:
        for _ in range(8):
            residue = actual - math.fsum([base_spent, *amounts])
            if residue == 0:
                return
            amounts[i] = math.nextafter(amounts[i], math.inf if residue > 0 else -math.inf)


@dataclass(frozen=True)
class PainGainRule:
    funder_share_cap: float = 0.75
    contractor_gain_share: float = 0.0

    def __post_init__(self) -> None:
        for name in ("funder_share_cap", "contractor_gain_share"):
            if not 0 <= getattr(self, name) <= 1:
                raise DomainError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class Settlement:
    funder_pays: float = 0.0
    counterparty_pays: float = 0.0
    contractor_bonus: float = 0.0


def split_exact(total: float, share: float) -> tuple[float, float]:
    """Split ``total`` into ``share`` and remainder with parts summing exactly to it.

    The larger part is taken as a residual and the smaller recomputed from it;
    that last subtraction is exact (Sterbenz), so ``a + b == total``.
    """
    if share <= 0.5:
        big = total - share * total
        small = total - big
        return small, big
    big = share * total
    return big, total - big


def pain_gain_settlement(target: float, actual: float, rule: PainGainRule) -> Settlement:
    """Split an overrun between funder and counterparty, or share an underrun."""
    if not target > 0 or not actual > 0:
        raise DomainError("target and actual must be positive")
    if actual > target:
        funder, counterparty = split_exact(actual - target, rule.funder_share_cap)
        return Settlement(funder_pays=funder, counterparty_pays=counterparty)
    if actual < target:
        return Settlement(contractor_bonus=rule.contractor_gain_share * (target - actual))
    return Settlement()
