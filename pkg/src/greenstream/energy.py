"""Incremental (traffic-dependent) power of the end-to-end delivery path.

A delivery path is modeled as three segments: the access network, the core
network, and the data center serving the stream. Each contributes a linear
watts-per-Mbps figure, so path power is simply the intensity sum times the
bitrate. Idle/static device power is deliberately out of scope: it does not
change with the video bitrate, so quality incentives cannot touch it.

A small built-in catalog provides representative intensities for common
access technologies and CDN sizes. Catalog entries are frozen; extend by
constructing your own ``SegmentProfile`` values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType

from .quality import QualityTier

ACCESS = "access"
CORE = "core"
DATA_CENTER = "data_center"
SEGMENT_KINDS = frozenset({ACCESS, CORE, DATA_CENTER})


@dataclass(frozen=True)
class SegmentProfile:
    """One path segment's incremental power draw in watts per Mbps."""

    kind: str
    label: str
    watts_per_mbps: float

    def __post_init__(self) -> None:
        if self.kind not in SEGMENT_KINDS:
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if not (self.watts_per_mbps >= 0 and math.isfinite(self.watts_per_mbps)):
            raise ValueError(f"segment {self.label!r}: intensity must be finite and >= 0")


@dataclass(frozen=True)
class PathProfile:
    """Exactly one access, core, and data-center segment of one path."""

    access: SegmentProfile
    core: SegmentProfile
    data_center: SegmentProfile

    def __post_init__(self) -> None:
        for field_name, kind in ((ACCESS, self.access.kind), (CORE, self.core.kind),
                                 (DATA_CENTER, self.data_center.kind)):
            if kind != field_name:
                raise ValueError(f"segment of kind {kind!r} placed in {field_name!r} slot")

    @property
    def total_intensity(self) -> float:
        return (self.access.watts_per_mbps + self.core.watts_per_mbps
                + self.data_center.watts_per_mbps)


CORE_PROFILE = SegmentProfile(CORE, "core network", 0.03)

ACCESS_CATALOG = MappingProxyType({
    "wired": SegmentProfile(ACCESS, "wired broadband", 0.02),
    "4g_suburban": SegmentProfile(ACCESS, "4G suburban", 1.5),
    "4g_dense_urban": SegmentProfile(ACCESS, "4G dense urban", 8.86),
    "4g_wilderness": SegmentProfile(ACCESS, "4G wilderness-to-urban", 14.9),
    "5g_dense_urban": SegmentProfile(ACCESS, "5G dense urban", 4.2),
    "5g_wilderness": SegmentProfile(ACCESS, "5G wilderness-to-urban", 6.3),
    "6g": SegmentProfile(ACCESS, "6G", 0.42),
})

DATA_CENTER_CATALOG = MappingProxyType({
    "very_large": SegmentProfile(DATA_CENTER, "very large CDN", 0.01),
    "large": SegmentProfile(DATA_CENTER, "large CDN", 0.025),
    "medium": SegmentProfile(DATA_CENTER, "medium CDN", 0.05),
    "small": SegmentProfile(DATA_CENTER, "small CDN", 0.09),
})


def builtin_path(access: str = "wired", data_center: str = "small") -> PathProfile:
    """Assemble a path from catalog names (core is always the built-in core)."""
    try:
        acc = ACCESS_CATALOG[access]
    except KeyError:
        raise KeyError(f"unknown access profile {access!r}; "
                       f"choose from {sorted(ACCESS_CATALOG)}") from None
    try:
        dc = DATA_CENTER_CATALOG[data_center]
    except KeyError:
        raise KeyError(f"unknown data-center profile {data_center!r}; "
                       f"choose from {sorted(DATA_CENTER_CATALOG)}") from None
    return PathProfile(acc, CORE_PROFILE, dc)


def path_power(path: PathProfile, bitrate: float) -> float:
    """Incremental power in watts to push `bitrate` Mbps down the path."""
    if bitrate < 0 or not math.isfinite(bitrate):
        raise ValueError("bitrate must be finite and >= 0")
    return path.total_intensity * bitrate


@dataclass(frozen=True)
class EnergyReduction:
    """Per-segment and total power saved by a tier downgrade, in watts."""

    access: float
    core: float
    data_center: float

    @property
    def total(self) -> float:
        return self.access + self.core + self.data_center


def energy_reduction(path: PathProfile, from_tier: QualityTier,
                     to_tier: QualityTier) -> EnergyReduction:
    """Power saved per segment when a stream drops from `from_tier` to `to_tier`."""
    if from_tier.bitrate < to_tier.bitrate:
        raise ValueError("downgrade expected: from_tier must not be below to_tier")
    delta = from_tier.bitrate - to_tier.bitrate
    return EnergyReduction(
        access=path.access.watts_per_mbps * delta,
        core=path.core.watts_per_mbps * delta,
        data_center=path.data_center.watts_per_mbps * delta,
    )


def segment_shares(path: PathProfile) -> dict[str, float]:
    """Each segment's fraction of the path's incremental power.

    Shares are bitrate-independent because every segment scales linearly
    with the same bitrate.
    """
    total = path.total_intensity
    if total <= 0:
        raise ValueError("all-zero path has no defined segment shares")
    return {
        ACCESS: path.access.watts_per_mbps / total,
        CORE: path.core.watts_per_mbps / total,
        DATA_CENTER: path.data_center.watts_per_mbps / total,
    }
