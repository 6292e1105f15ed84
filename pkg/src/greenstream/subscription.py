"""Two-tier subscription terms derived from a planned schedule.

A two-tier subscription lets the provider serve up to a fixed fraction of a
period's videos one tier below maximum quality, in exchange for a price
discount plus carbon rewards. The discount tracks the average bitrate
reduction (the provider's saved usage cost); rewards cover whatever utility
loss the discount leaves uncompensated, converted to points at a
configurable rate. Utility loss and discount are compared on the same
normalized [0, 1] scale.
"""
from __future__ import annotations

from dataclasses import dataclass

from .quality import UserProfile, utility_loss
from .scheduler import Schedule, SingleTier

DEFAULT_REWARD_RATE = 100.0

DISCOUNT_ADVISORY = (
    "discount reflects incremental (traffic-dependent) energy savings only; "
    "realizable cost savings are smaller once idle device energy is included"
)


@dataclass(frozen=True)
class TwoTierPlan:
    """Subscription terms for one user profile over one planning period."""

    profile: str
    reduced_tier: str | None
    period_days: int
    reduced_days: int
    max_reduced_fraction: float
    discount_fraction: float
    net_utility_loss: float
    reward_points: float
    reward_rate: float

    def to_dict(self) -> dict:
        return {
            "profile": self.profile,
            "reduced_tier": self.reduced_tier,
            "period_days": self.period_days,
            "reduced_days": self.reduced_days,
            "max_reduced_fraction": self.max_reduced_fraction,
            "discount_fraction": self.discount_fraction,
            "net_utility_loss": self.net_utility_loss,
            "reward_points": self.reward_points,
            "reward_rate": self.reward_rate,
            "discount_note": DISCOUNT_ADVISORY,
        }


def synthesize(schedule: Schedule, profile: UserProfile,
               reward_rate: float = DEFAULT_REWARD_RATE) -> TwoTierPlan:
    """Turn a feasible single-tier schedule into two-tier subscription terms.

    The reduced-quality fraction is the share of reduced days in the period;
    the discount is the period's average bitrate reduction; rewards convert
    the still-uncompensated utility loss into points, never negative.
    """
    if reward_rate < 0:
        raise ValueError("reward_rate must be >= 0")
    if not schedule.feasible:
        raise ValueError(
            "schedule is infeasible (budget negative on "
            f"{len(schedule.infeasible_dates)} day(s), first on "
            f"{schedule.infeasible_dates[0]}); lower the tier or relax the cap"
        )
    reduced_names = schedule.reduced_tier_names
    if len(reduced_names) > 1:
        raise ValueError(
            f"schedule mixes reduced tiers {reduced_names}; a two-tier "
            "subscription needs a single-tier reduction strategy"
        )
    if reduced_names:
        reduced_tier = reduced_names[0]
    elif isinstance(schedule.strategy, SingleTier):
        reduced_tier = schedule.strategy.to.name
    else:
        reduced_tier = None

    top = schedule.top_tier
    total_loss = sum(
        utility_loss(top, d.tier, schedule.ladder, profile)
        for d in schedule.days
        if d.tier.name != top.name
    )
    discount = schedule.avg_bitrate_reduction
    nl = total_loss - discount
    return TwoTierPlan(
        profile=profile.label,
        reduced_tier=reduced_tier,
        period_days=schedule.period_days,
        reduced_days=schedule.reduced_day_count,
        max_reduced_fraction=schedule.reduced_day_count / schedule.period_days,
        discount_fraction=discount,
        net_utility_loss=nl,
        reward_points=reward_rate * max(0.0, nl),
        reward_rate=reward_rate,
    )


@dataclass(frozen=True)
class MultiMonthPlan:
    """Day-weighted aggregation of per-period plans for one profile."""

    months: tuple[TwoTierPlan, ...]
    profile: str
    reduced_tier: str | None
    total_days: int
    total_reduced_days: int
    max_reduced_fraction: float
    discount_fraction: float
    total_reward_points: float
    reward_rate: float

    def to_dict(self) -> dict:
        return {
            "profile": self.profile,
            "reduced_tier": self.reduced_tier,
            "months": [m.to_dict() for m in self.months],
            "total_days": self.total_days,
            "total_reduced_days": self.total_reduced_days,
            "max_reduced_fraction": self.max_reduced_fraction,
            "discount_fraction": self.discount_fraction,
            "total_reward_points": self.total_reward_points,
            "reward_rate": self.reward_rate,
        }


def aggregate_months(plans: list[TwoTierPlan] | tuple[TwoTierPlan, ...]) -> MultiMonthPlan:
    """Combine consecutive periods into one multi-month offer.

    Fractions and discounts are weighted by period length; reward points
    add up. All periods must target the same profile and reduced tier.
    """
    months = tuple(plans)
    if not months:
        raise ValueError("need at least one period plan")
    labels = {m.profile for m in months}
    if len(labels) > 1:
        raise ValueError(f"plans span multiple profiles: {sorted(labels)}")
    rates = {m.reward_rate for m in months}
    if len(rates) > 1:
        raise ValueError("plans use different reward rates")
    tiers = {m.reduced_tier for m in months if m.reduced_tier is not None}
    if len(tiers) > 1:
        raise ValueError(f"plans reduce to different tiers: {sorted(tiers)}")

    total_days = sum(m.period_days for m in months)
    total_reduced = sum(m.reduced_days for m in months)
    discount = sum(m.discount_fraction * m.period_days for m in months) / total_days
    return MultiMonthPlan(
        months=months,
        profile=months[0].profile,
        reduced_tier=tiers.pop() if tiers else None,
        total_days=total_days,
        total_reduced_days=total_reduced,
        max_reduced_fraction=total_reduced / total_days,
        discount_fraction=discount,
        total_reward_points=sum(m.reward_points for m in months),
        reward_rate=months[0].reward_rate,
    )
