"""Daily carbon-intensity series and carbon-aware data-center choice.

Series are ingested from a strict one-row-per-day CSV export
(``date,carbon_intensity_gco2eq_per_kwh``). Emission rates combine the
path's watts-per-Mbps intensities with the grid carbon intensity of the
region each segment draws power from; serving from a remote region doubles
the core-network energy because of the longer haul, and splits the
attribution between the two grids.

Unit convention, fixed here and nowhere else: W/Mbps * Mbps = W, divided by
1000 to kW, times gCO2e/kWh gives gCO2e per hour.
"""
from __future__ import annotations

import csv
import datetime as dt
import io
import math
from dataclasses import dataclass
from pathlib import Path

CSV_HEADER = "date,carbon_intensity_gco2eq_per_kwh"

_ONE_DAY = dt.timedelta(days=1)


class CsvParseError(ValueError):
    """Malformed intensity CSV; `line` is the 1-based line in the file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class CarbonIntensitySeries:
    """Per-day grid carbon intensity (gCO2e/kWh) for one region.

    Dates must be consecutive calendar days; intensities finite and >= 0.
    """

    region: str
    dates: tuple[dt.date, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.dates:
            raise ValueError("series must contain at least one day")
        if len(self.dates) != len(self.values):
            raise ValueError("dates and values must have equal length")
        for a, b in zip(self.dates, self.dates[1:]):
            if b != a + _ONE_DAY:
                raise ValueError(f"dates must be consecutive days; gap or disorder at {b}")
        for d, v in zip(self.dates, self.values):
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{d}: intensity must be finite and >= 0")

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def start(self) -> dt.date:
        return self.dates[0]

    @property
    def end(self) -> dt.date:
        return self.dates[-1]

    def aligned_with(self, other: "CarbonIntensitySeries") -> bool:
        return self.dates == other.dates


def parse_intensity_csv(data: bytes | str, region: str = "") -> CarbonIntensitySeries:
    """Parse a daily intensity CSV export into a validated series.

    Rejects, with the offending line number: a wrong header, short/long
    rows, non-ISO dates, duplicate or non-consecutive dates, and negative
    or non-numeric intensities.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CsvParseError(f"not valid UTF-8: {exc}") from exc
    else:
        text = data
    if not text.strip():
        raise CsvParseError("empty file")

    reader = csv.reader(io.StringIO(text))
    rows = [(lineno, row) for lineno, row in enumerate(reader, start=1) if row]
    header_line, header = rows[0]
    if [c.strip() for c in header] != CSV_HEADER.split(","):
        raise CsvParseError(
            f"expected header {CSV_HEADER!r}, got {','.join(header)!r}", header_line
        )
    if len(rows) == 1:
        raise CsvParseError("no data rows after header")

    dates: list[dt.date] = []
    values: list[float] = []
    for lineno, row in rows[1:]:
        if len(row) != 2:
            raise CsvParseError(f"expected 2 fields, got {len(row)}", lineno)
        raw_date, raw_value = row[0].strip(), row[1].strip()
        try:
            day = dt.date.fromisoformat(raw_date)
        except ValueError:
            raise CsvParseError(f"invalid ISO date {raw_date!r}", lineno) from None
        try:
            value = float(raw_value)
        except ValueError:
            raise CsvParseError(f"non-numeric intensity {raw_value!r}", lineno) from None
        if not math.isfinite(value):
            raise CsvParseError(f"non-finite intensity {raw_value!r}", lineno)
        if value < 0:
            raise CsvParseError(f"negative intensity {value}", lineno)
        if dates:
            if day <= dates[-1]:
                raise CsvParseError(
                    f"dates must be strictly increasing; {day} follows {dates[-1]}", lineno
                )
            if day != dates[-1] + _ONE_DAY:
                raise CsvParseError(
                    f"gap in dates: {day} does not follow {dates[-1]}", lineno
                )
        dates.append(day)
        values.append(value)

    return CarbonIntensitySeries(region=region, dates=tuple(dates), values=tuple(values))


def load_intensity_csv(path: str | Path, region: str | None = None) -> CarbonIntensitySeries:
    """Read and parse a CSV file; region defaults to the file stem."""
    p = Path(path)
    data = p.read_bytes()
    return parse_intensity_csv(data, region=region if region is not None else p.stem)


@dataclass(frozen=True)
class DualPathConfig:
    """Watts-per-Mbps intensities for a path with a local and a remote DC option.

    The core figure is counted once when serving locally and twice when
    serving remotely (longer haul), with the remote half attributed to the
    remote region's grid.
    """

    access: float
    core: float
    local_dc: float
    remote_dc: float

    def __post_init__(self) -> None:
        for name in ("access", "core", "local_dc", "remote_dc"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be finite and >= 0")


def local_emission_rate(cfg: DualPathConfig, ci_local: float, bitrate: float) -> float:
    """gCO2e per hour when the local data center serves `bitrate` Mbps."""
    _check_rate_args(ci_local=ci_local, bitrate=bitrate)
    return (cfg.access + cfg.core + cfg.local_dc) * bitrate * ci_local / 1000.0


def remote_emission_rate(cfg: DualPathConfig, ci_local: float, ci_remote: float,
                         bitrate: float) -> float:
    """gCO2e per hour when the remote data center serves `bitrate` Mbps.

    Access plus one core hop burn on the local grid; the second core hop
    plus the remote data center burn on the remote grid.
    """
    _check_rate_args(ci_local=ci_local, ci_remote=ci_remote, bitrate=bitrate)
    local_side = (cfg.access + cfg.core) * ci_local
    remote_side = (cfg.core + cfg.remote_dc) * ci_remote
    return (local_side + remote_side) * bitrate / 1000.0


def remote_preferred(cfg: DualPathConfig, ci_local: float, ci_remote: float) -> bool:
    """True iff serving remotely emits strictly less than serving locally.

    Cross-multiplied form of ci_remote/ci_local < local_dc/(core + remote_dc),
    which avoids dividing and settles the edge cases: ties and a zero local
    intensity keep the video local.
    """
    _check_rate_args(ci_local=ci_local, ci_remote=ci_remote)
    return ci_remote * (cfg.core + cfg.remote_dc) < ci_local * cfg.local_dc


def remote_threshold(cfg: DualPathConfig) -> float:
    """Intensity ratio ci_remote/ci_local below which remote serving wins."""
    denom = cfg.core + cfg.remote_dc
    if denom == 0:
        return math.inf
    return cfg.local_dc / denom


def count_remote_days(series_local: CarbonIntensitySeries,
                      series_remote: CarbonIntensitySeries,
                      cfg: DualPathConfig) -> int:
    """Number of days on which the remote data center is carbon-preferable."""
    if not series_local.aligned_with(series_remote):
        raise ValueError("series must cover identical date ranges")
    return sum(
        remote_preferred(cfg, ci_l, ci_r)
        for ci_l, ci_r in zip(series_local.values, series_remote.values)
    )


def _check_rate_args(**kwargs: float) -> None:
    for name, v in kwargs.items():
        if not (v >= 0 and math.isfinite(v)):
            raise ValueError(f"{name} must be finite and >= 0")
