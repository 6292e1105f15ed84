"""Bitrate-to-satisfaction model for tiered video streaming.

Viewer satisfaction is scored on the 1..5 opinion scale as a logarithmic
function of bitrate, anchored at 1 for the ladder's minimum bitrate and at 5
for the bitrate where the viewer is fully satisfied. Environmentally
conscious ("green") viewers reach full satisfaction at a lower bitrate; this
is expressed by a greenness factor gamma >= 1 that divides the top anchor
bitrate. Scores above 5 (possible for green viewers watching above their
saturation bitrate) are clamped, so the normalized utility lives in
[0.2, 1.0].

All functions here are pure; they are the basis for the per-day utility-loss
bookkeeping done by the scheduler and subscription modules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

MOS_MIN = 1.0
MOS_MAX = 5.0


@dataclass(frozen=True)
class QualityTier:
    """A named resolution tier and the bitrate it streams at (Mbps)."""

    name: str
    bitrate: float

    def __post_init__(self) -> None:
        if not (self.bitrate > 0 and math.isfinite(self.bitrate)):
            raise ValueError(f"tier {self.name!r}: bitrate must be finite and > 0")


@dataclass(frozen=True)
class QualityLadder:
    """Ordered set of tiers, highest bitrate first.

    `min_bitrate` is the floor of the satisfaction model's domain; every
    tier must sit strictly above it.
    """

    tiers: tuple[QualityTier, ...]
    min_bitrate: float = 0.2

    def __post_init__(self) -> None:
        if not self.tiers:
            raise ValueError("ladder needs at least one tier")
        if not (self.min_bitrate > 0 and math.isfinite(self.min_bitrate)):
            raise ValueError("min_bitrate must be finite and > 0")
        object.__setattr__(self, "tiers", tuple(self.tiers))
        rates = [t.bitrate for t in self.tiers]
        for a, b in zip(rates, rates[1:]):
            if b >= a:
                raise ValueError("tiers must be strictly descending in bitrate")
        if rates[-1] <= self.min_bitrate:
            raise ValueError("lowest tier must sit above min_bitrate")
        names = [t.name.lower() for t in self.tiers]
        if len(set(names)) != len(names):
            raise ValueError("tier names must be unique")

    @property
    def top(self) -> QualityTier:
        return self.tiers[0]

    @property
    def max_bitrate(self) -> float:
        return self.tiers[0].bitrate

    def tier(self, name: str) -> QualityTier:
        """Look up a tier by name, case-insensitively."""
        for t in self.tiers:
            if t.name.lower() == name.lower():
                return t
        raise KeyError(f"no tier named {name!r} in ladder")


@dataclass(frozen=True)
class UserProfile:
    """Viewer type: gamma = 1 wants maximum quality, gamma > 1 saturates earlier."""

    label: str
    gamma: float

    def __post_init__(self) -> None:
        if not (self.gamma >= 1.0 and math.isfinite(self.gamma)):
            raise ValueError("gamma must be finite and >= 1")


DEFAULT_LADDER = QualityLadder(
    (QualityTier("4K", 20.0), QualityTier("FHD", 8.0), QualityTier("HD", 2.5)),
    min_bitrate=0.2,
)

HIGH_QUALITY_USER = UserProfile("high-quality", 1.0)
GREEN_USER = UserProfile("green", 1.5)
DEFAULT_PROFILES = (HIGH_QUALITY_USER, GREEN_USER)


def mos(bitrate: float, ladder: QualityLadder, profile: UserProfile) -> float:
    """Opinion score in [1, 5] for streaming at `bitrate` Mbps.

    The score rises logarithmically from 1 at the ladder minimum to 5 at
    max_bitrate / gamma, and is clamped at 5 beyond that point. Logarithm
    base cancels in the ratio, natural log is used. Bitrates below the
    ladder minimum are rejected rather than clamped so bad input data
    surfaces early.
    """
    x_min = ladder.min_bitrate
    x_sat = ladder.max_bitrate / profile.gamma
    if x_sat <= x_min:
        raise ValueError(
            f"gamma {profile.gamma} pushes the saturation bitrate to or below "
            f"the ladder minimum {x_min}"
        )
    if not math.isfinite(bitrate) or bitrate < x_min:
        raise ValueError(f"bitrate {bitrate} below ladder minimum {x_min}")
    span = math.log(x_sat) - math.log(x_min)
    score = (4.0 * math.log(bitrate) + math.log(x_sat) - 5.0 * math.log(x_min)) / span
    return min(max(score, MOS_MIN), MOS_MAX)


def utility(bitrate: float, ladder: QualityLadder, profile: UserProfile) -> float:
    """Opinion score normalized to [0.2, 1.0]."""
    return mos(bitrate, ladder, profile) / MOS_MAX


def utility_loss(
    from_tier: QualityTier,
    to_tier: QualityTier,
    ladder: QualityLadder,
    profile: UserProfile,
) -> float:
    """Utility given up when a stream drops from `from_tier` to `to_tier` (>= 0)."""
    if from_tier.bitrate < to_tier.bitrate:
        raise ValueError(
            f"downgrade expected: {from_tier.name} ({from_tier.bitrate} Mbps) is "
            f"below {to_tier.name} ({to_tier.bitrate} Mbps)"
        )
    return utility(from_tier.bitrate, ladder, profile) - utility(
        to_tier.bitrate, ladder, profile
    )


def net_utility_loss(delta_u: float, discount: float) -> float:
    """Utility loss left after a price discount, on the shared [0, 1] scale.

    Negative results mean the discount over-compensates the loss.
    """
    if delta_u < 0:
        raise ValueError("utility loss must be >= 0")
    if not 0.0 <= discount <= 1.0:
        raise ValueError("discount must be a fraction in [0, 1]")
    return delta_u - discount
