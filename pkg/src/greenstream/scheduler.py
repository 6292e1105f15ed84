"""Sequential carbon-budget planner over a daily intensity series.

The planner walks the period day by day carrying a carbon budget that starts
at zero. Each day the cap is credited and the day's *effective intensity* is
debited; quality is reduced exactly on the days where streaming at full
quality would drive the budget negative. A feasible plan keeps the budget
non-negative throughout, which is the same as keeping every prefix's average
effective intensity at or below the cap.

Effective intensity normalizes a day's attributable emission rate by the
energy rate of serving full quality from the local data center. The
normalization makes a full-quality local day contribute exactly the raw grid
intensity, a reduced day contribute the intensity scaled by the bitrate
ratio, and, for a single data center, cancels the path profile entirely: the
plan then depends only on the intensity series and the cap. With a remote
data-center option the per-day choice follows the emission-rate comparison
from the carbon module and the path parameters do matter.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .carbon import CarbonIntensitySeries, DualPathConfig, remote_preferred
from .quality import (
    DEFAULT_PROFILES,
    QualityLadder,
    QualityTier,
    UserProfile,
    utility_loss,
)

LOCAL = "local"
REMOTE = "remote"
NO_CHOICE = "n/a"


@dataclass(frozen=True)
class SingleTier:
    """Reduce to one fixed tier whenever a reduction is needed."""

    to: QualityTier


@dataclass(frozen=True)
class MixedFirstN:
    """Reduce to `deep` for the first `n` reduction events, then to `rest`.

    Events are counted over reductions, not calendar days.
    """

    n: int
    deep: QualityTier
    rest: QualityTier

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")


ReductionStrategy = SingleTier | MixedFirstN


def validate_strategy(strategy: ReductionStrategy, ladder: QualityLadder) -> None:
    """Every target tier must sit strictly below the ladder's top tier."""
    targets = (strategy.to,) if isinstance(strategy, SingleTier) else (strategy.deep, strategy.rest)
    for t in targets:
        if t.bitrate >= ladder.max_bitrate:
            raise ValueError(
                f"strategy target {t.name!r} ({t.bitrate} Mbps) must be strictly "
                f"below the top tier ({ladder.max_bitrate} Mbps)"
            )
        if t.bitrate < ladder.min_bitrate:
            raise ValueError(f"strategy target {t.name!r} below ladder minimum")


def describe_strategy(strategy: ReductionStrategy) -> str:
    if isinstance(strategy, SingleTier):
        return f"single:{strategy.to.name}"
    return f"mixed:{strategy.n}:{strategy.deep.name}:{strategy.rest.name}"


def _tier_for_event(strategy: ReductionStrategy, event_index: int) -> QualityTier:
    if isinstance(strategy, SingleTier):
        return strategy.to
    return strategy.deep if event_index < strategy.n else strategy.rest


def effective_intensity(
    tier: QualityTier,
    ladder: QualityLadder,
    ci_local: float,
    *,
    use_remote: bool = False,
    ci_remote: float | None = None,
    dual_path: DualPathConfig | None = None,
) -> float:
    """A day's emission rate normalized by the local full-quality energy rate.

    Local serving cancels the path algebraically, so the result is exactly
    ci_local * (tier bitrate / top bitrate). Remote serving keeps the path
    parameters in play and needs `dual_path` and `ci_remote`.
    """
    ratio = tier.bitrate / ladder.max_bitrate
    if not use_remote:
        return ci_local * ratio
    if dual_path is None or ci_remote is None:
        raise ValueError("remote serving needs dual_path and ci_remote")
    baseline = dual_path.access + dual_path.core + dual_path.local_dc
    if baseline <= 0:
        raise ValueError("baseline local path has zero power; effective intensity undefined")
    numerator = ((dual_path.access + dual_path.core) * ci_local
                 + (dual_path.core + dual_path.remote_dc) * ci_remote)
    return numerator / baseline * ratio


@dataclass(frozen=True)
class DayDecision:
    date: dt.date
    ci_local: float
    ci_remote: float | None
    cdn: str
    tier: QualityTier
    effective_intensity: float
    budget_after: float


@dataclass(frozen=True)
class Schedule:
    """Per-day planning decisions plus aggregate metrics for one period."""

    ladder: QualityLadder
    cap: float
    strategy: ReductionStrategy
    profiles: tuple[UserProfile, ...]
    days: tuple[DayDecision, ...]
    region_local: str
    region_remote: str | None
    feasible: bool
    infeasible_dates: tuple[dt.date, ...]
    reduced_day_count: int
    avg_bitrate_reduction: float
    total_utility_loss: dict[str, float]
    avg_utility_reduction: dict[str, float]

    @property
    def period_days(self) -> int:
        return len(self.days)

    @property
    def top_tier(self) -> QualityTier:
        return self.ladder.top

    @property
    def reduced_tier_names(self) -> tuple[str, ...]:
        seen: list[str] = []
        for d in self.days:
            if d.tier.name != self.top_tier.name and d.tier.name not in seen:
                seen.append(d.tier.name)
        return tuple(seen)

    def to_dict(self) -> dict:
        return {
            "region_local": self.region_local,
            "region_remote": self.region_remote,
            "cap": self.cap,
            "strategy": describe_strategy(self.strategy),
            "period_days": self.period_days,
            "feasible": self.feasible,
            "infeasible_dates": [d.isoformat() for d in self.infeasible_dates],
            "reduced_day_count": self.reduced_day_count,
            "avg_bitrate_reduction": self.avg_bitrate_reduction,
            "total_utility_loss": dict(self.total_utility_loss),
            "avg_utility_reduction": dict(self.avg_utility_reduction),
        }


CSV_COLUMNS = ("date", "ci_local", "ci_remote", "cdn", "tier",
               "effective_intensity", "budget")


def plan(
    series_local: CarbonIntensitySeries,
    *,
    ladder: QualityLadder,
    cap: float,
    strategy: ReductionStrategy,
    profiles: Sequence[UserProfile] = DEFAULT_PROFILES,
    series_remote: CarbonIntensitySeries | None = None,
    dual_path: DualPathConfig | None = None,
) -> Schedule:
    """Run the sequential budget procedure and return the full schedule.

    Per day: pick the data center with the lower emission rate (when a
    remote series is given), try full quality against the running budget,
    and fall back to the strategy's reduction tier when full quality would
    overdraw. Days that stay negative even after reducing are carried at a
    negative budget and flag the schedule infeasible.
    """
    if cap <= 0:
        raise ValueError("cap must be > 0")
    validate_strategy(strategy, ladder)
    dual = series_remote is not None
    if dual:
        if dual_path is None:
            raise ValueError("planning with a remote series needs dual_path")
        if not series_local.aligned_with(series_remote):
            raise ValueError("local and remote series must cover identical dates")
        if dual_path.access + dual_path.core + dual_path.local_dc <= 0:
            raise ValueError("baseline local path has zero power")

    top = ladder.top
    budget = 0.0
    reduction_events = 0
    days: list[DayDecision] = []
    for i, (day, ci_l) in enumerate(zip(series_local.dates, series_local.values)):
        if dual:
            ci_r = series_remote.values[i]
            use_remote = remote_preferred(dual_path, ci_l, ci_r)
            cdn = REMOTE if use_remote else LOCAL
        else:
            ci_r = None
            use_remote = False
            cdn = NO_CHOICE
        eff_full = effective_intensity(
            top, ladder, ci_l,
            use_remote=use_remote, ci_remote=ci_r, dual_path=dual_path,
        )
        candidate = budget + cap - eff_full
        if candidate >= 0:
            tier = top
            eff = eff_full
            budget = candidate
        else:
            tier = _tier_for_event(strategy, reduction_events)
            reduction_events += 1
            eff = eff_full * (tier.bitrate / top.bitrate)
            budget = budget + cap - eff
        days.append(DayDecision(
            date=day, ci_local=ci_l, ci_remote=ci_r, cdn=cdn,
            tier=tier, effective_intensity=eff, budget_after=budget,
        ))

    infeasible_dates = tuple(d.date for d in days if d.budget_after < 0)
    reduced = [d for d in days if d.tier.name != top.name]
    n_days = len(days)
    avg_reduction = sum(1.0 - d.tier.bitrate / top.bitrate for d in days) / n_days
    totals: dict[str, float] = {}
    averages: dict[str, float] = {}
    for p in profiles:
        loss = sum(utility_loss(top, d.tier, ladder, p) for d in reduced)
        totals[p.label] = loss
        averages[p.label] = loss / n_days

    return Schedule(
        ladder=ladder,
        cap=cap,
        strategy=strategy,
        profiles=tuple(profiles),
        days=tuple(days),
        region_local=series_local.region,
        region_remote=series_remote.region if dual else None,
        feasible=not infeasible_dates,
        infeasible_dates=infeasible_dates,
        reduced_day_count=len(reduced),
        avg_bitrate_reduction=avg_reduction,
        total_utility_loss=totals,
        avg_utility_reduction=averages,
    )


@dataclass(frozen=True)
class CapSweepEntry:
    cap: float
    reduced_day_count: int
    avg_bitrate_reduction: float
    total_utility_loss: dict[str, float]
    avg_utility_reduction: dict[str, float]


@dataclass(frozen=True)
class CapSweepResult:
    """Plan aggregates per cap, ordered by cap descending."""

    entries: tuple[CapSweepEntry, ...] = field(default_factory=tuple)


def sweep_caps(
    series_local: CarbonIntensitySeries,
    *,
    ladder: QualityLadder,
    caps: Iterable[float],
    strategy: ReductionStrategy,
    profiles: Sequence[UserProfile] = DEFAULT_PROFILES,
    series_remote: CarbonIntensitySeries | None = None,
    dual_path: DualPathConfig | None = None,
) -> CapSweepResult:
    """One plan per cap; entries come back sorted from loosest to tightest cap."""
    cap_list = sorted(set(float(c) for c in caps), reverse=True)
    if not cap_list:
        raise ValueError("caps must be non-empty")
    if any(c <= 0 for c in cap_list):
        raise ValueError("caps must be positive")
    entries = []
    for cap in cap_list:
        s = plan(
            series_local, ladder=ladder, cap=cap, strategy=strategy,
            profiles=profiles, series_remote=series_remote, dual_path=dual_path,
        )
        entries.append(CapSweepEntry(
            cap=cap,
            reduced_day_count=s.reduced_day_count,
            avg_bitrate_reduction=s.avg_bitrate_reduction,
            total_utility_loss=dict(s.total_utility_loss),
            avg_utility_reduction=dict(s.avg_utility_reduction),
        ))
    return CapSweepResult(entries=tuple(entries))


@dataclass(frozen=True)
class WeightedMetrics:
    avg_bitrate_reduction: float
    avg_utility_reduction: dict[str, float]
    total_utility_loss: dict[str, float]


def plan_metrics_weighted(schedule: Schedule, demand_weights: Sequence[float]) -> WeightedMetrics:
    """Aggregate the schedule under an uneven per-day demand distribution.

    Uniform weights reproduce the schedule's own aggregates; the totals are
    scaled so that one weight unit corresponds to one average day.
    """
    weights = [float(w) for w in demand_weights]
    if len(weights) != schedule.period_days:
        raise ValueError(
            f"need one weight per day: got {len(weights)} for {schedule.period_days} days"
        )
    if any(w < 0 for w in weights):
        raise ValueError("weights must be >= 0")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")

    top = schedule.top_tier
    avg_reduction = sum(
        w * (1.0 - d.tier.bitrate / top.bitrate) for w, d in zip(weights, schedule.days)
    )
    averages: dict[str, float] = {}
    totals: dict[str, float] = {}
    for p in schedule.profiles:
        avg = sum(
            w * utility_loss(top, d.tier, schedule.ladder, p)
            for w, d in zip(weights, schedule.days)
            if d.tier.name != top.name
        )
        averages[p.label] = avg
        totals[p.label] = avg * schedule.period_days
    return WeightedMetrics(
        avg_bitrate_reduction=avg_reduction,
        avg_utility_reduction=averages,
        total_utility_loss=totals,
    )
