"""Carbon-aware streaming-quality planning and 2-tier subscription synthesis.

The package turns daily grid carbon-intensity series and per-segment energy
profiles into a per-day streaming plan (which days to serve at reduced
quality, and from which data center) that keeps the period's average
effective carbon intensity under a cap, then derives the subscription terms
(reduced-quality fraction, discount, carbon rewards) that compensate users
for the plan.
"""
from .carbon import (
    CarbonIntensitySeries,
    CsvParseError,
    DualPathConfig,
    count_remote_days,
    load_intensity_csv,
    local_emission_rate,
    parse_intensity_csv,
    remote_emission_rate,
    remote_preferred,
    remote_threshold,
)
from .energy import (
    ACCESS_CATALOG,
    CORE_PROFILE,
    DATA_CENTER_CATALOG,
    EnergyReduction,
    PathProfile,
    SegmentProfile,
    builtin_path,
    energy_reduction,
    path_power,
    segment_shares,
)
from .quality import (
    DEFAULT_LADDER,
    DEFAULT_PROFILES,
    GREEN_USER,
    HIGH_QUALITY_USER,
    QualityLadder,
    QualityTier,
    UserProfile,
    mos,
    net_utility_loss,
    utility,
    utility_loss,
)
from .scheduler import (
    CapSweepEntry,
    CapSweepResult,
    DayDecision,
    MixedFirstN,
    Schedule,
    SingleTier,
    effective_intensity,
    plan,
    plan_metrics_weighted,
    sweep_caps,
)
from .subscription import (
    DEFAULT_REWARD_RATE,
    MultiMonthPlan,
    TwoTierPlan,
    aggregate_months,
    synthesize,
)

__version__ = "0.1.0"
