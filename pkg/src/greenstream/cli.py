"""Command-line front end: plan a period, sweep caps, or count remote-CDN days.

Configuration is a single JSON document; command-line flags override it.
Output files are deterministic for a given config and inputs: stable row
ordering, floats at 6 significant digits, no timestamps.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from itertools import product
from pathlib import Path

from .carbon import (
    CsvParseError,
    DualPathConfig,
    count_remote_days,
    load_intensity_csv,
)
from .energy import ACCESS_CATALOG, CORE_PROFILE, DATA_CENTER_CATALOG
from .quality import DEFAULT_LADDER, DEFAULT_PROFILES, QualityLadder, QualityTier, UserProfile
from .scheduler import (
    CSV_COLUMNS,
    MixedFirstN,
    ReductionStrategy,
    Schedule,
    SingleTier,
    plan,
    sweep_caps,
)
from .subscription import DEFAULT_REWARD_RATE, synthesize

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

DEFAULT_CDN_GRID = ("very_large", "large", "medium", "small")

_CONFIG_KEYS = {
    "ladder", "segments", "profiles", "caps", "strategy",
    "local_ci", "remote_ci", "reward_rate", "out_dir", "cdn_grid",
}
_SEGMENT_KEYS = {"access", "core", "local_dc", "remote_dc"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    ladder: QualityLadder
    profiles: tuple[UserProfile, ...]
    access: float
    core: float
    local_dc: float
    remote_dc: float
    caps: tuple[float, ...]
    strategy_spec: str | None
    local_ci: Path | None
    remote_ci: Path | None
    reward_rate: float
    out_dir: Path
    cdn_grid: tuple[str, ...]

    def dual_path(self) -> DualPathConfig:
        return DualPathConfig(self.access, self.core, self.local_dc, self.remote_dc)


DEFAULT_CONFIG = RunConfig(
    ladder=DEFAULT_LADDER,
    profiles=DEFAULT_PROFILES,
    access=ACCESS_CATALOG["wired"].watts_per_mbps,
    core=CORE_PROFILE.watts_per_mbps,
    local_dc=DATA_CENTER_CATALOG["small"].watts_per_mbps,
    remote_dc=DATA_CENTER_CATALOG["very_large"].watts_per_mbps,
    caps=(),
    strategy_spec="single-fhd",
    local_ci=None,
    remote_ci=None,
    reward_rate=DEFAULT_REWARD_RATE,
    out_dir=Path("out"),
    cdn_grid=DEFAULT_CDN_GRID,
)


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} key(s): {sorted(unknown)}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(f"{where}: must be finite")
    return v


def _parse_ladder(obj) -> QualityLadder:
    _require_keys(obj, {"tiers", "min_bitrate"}, "ladder")
    tiers = []
    for entry in obj.get("tiers", []):
        _require_keys(entry, {"name", "bitrate"}, "ladder tier")
        tiers.append(QualityTier(str(entry["name"]), _number(entry["bitrate"], "tier bitrate")))
    if not tiers:
        raise ConfigError("ladder.tiers must be non-empty")
    min_bitrate = _number(obj.get("min_bitrate", 0.2), "ladder.min_bitrate")
    try:
        return QualityLadder(tuple(tiers), min_bitrate=min_bitrate)
    except ValueError as exc:
        raise ConfigError(f"invalid ladder: {exc}") from exc


def _parse_profiles(obj) -> tuple[UserProfile, ...]:
    profiles = []
    for entry in obj:
        _require_keys(entry, {"label", "gamma"}, "profile")
        try:
            profiles.append(UserProfile(str(entry["label"]), _number(entry["gamma"], "gamma")))
        except ValueError as exc:
            raise ConfigError(f"invalid profile: {exc}") from exc
    if not profiles:
        raise ConfigError("profiles must be non-empty")
    return tuple(profiles)


def _segment_value(value, catalog, where: str) -> float:
    if isinstance(value, str):
        if value not in catalog:
            raise ConfigError(f"{where}: unknown profile {value!r}; "
                              f"choose from {sorted(catalog)} or give W/Mbps directly")
        return catalog[value].watts_per_mbps
    v = _number(value, where)
    if v < 0:
        raise ConfigError(f"{where}: must be >= 0")
    return v


def parse_strategy(spec: str, ladder: QualityLadder) -> ReductionStrategy:
    """Grammar: ``single-fhd``, ``single:<tier>``, or ``mixed:<n>:<deep>:<rest>``."""
    try:
        if spec == "single-fhd":
            return SingleTier(ladder.tier("FHD"))
        if spec.startswith("single:"):
            return SingleTier(ladder.tier(spec.split(":", 1)[1]))
        if spec.startswith("mixed:"):
            parts = spec.split(":")
            if len(parts) != 4:
                raise ConfigError(f"mixed strategy needs mixed:<n>:<deep>:<rest>, got {spec!r}")
            n = int(parts[1])
            return MixedFirstN(n, ladder.tier(parts[2]), ladder.tier(parts[3]))
    except KeyError as exc:
        raise ConfigError(f"strategy {spec!r}: {exc.args[0]}") from exc
    except ValueError as exc:
        raise ConfigError(f"strategy {spec!r}: {exc}") from exc
    raise ConfigError(f"unrecognized strategy {spec!r}")


def _strategy_spec_from_obj(obj) -> str:
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        kind = obj.get("kind")
        if kind == "single":
            _require_keys(obj, {"kind", "to"}, "strategy")
            return f"single:{obj['to']}"
        if kind == "mixed":
            _require_keys(obj, {"kind", "n", "deep", "rest"}, "strategy")
            return f"mixed:{obj['n']}:{obj['deep']}:{obj['rest']}"
        raise ConfigError(f"strategy.kind must be 'single' or 'mixed', got {kind!r}")
    raise ConfigError("strategy must be a string or an object")


def load_config(path: str | Path) -> RunConfig:
    """Load and validate the JSON config; unknown keys are rejected."""
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{p}: config must be a JSON object")
    _require_keys(raw, _CONFIG_KEYS, "config")

    cfg = DEFAULT_CONFIG
    if "ladder" in raw:
        cfg = replace(cfg, ladder=_parse_ladder(raw["ladder"]))
    if "profiles" in raw:
        cfg = replace(cfg, profiles=_parse_profiles(raw["profiles"]))
    if "segments" in raw:
        seg = raw["segments"]
        _require_keys(seg, _SEGMENT_KEYS, "segments")
        if "access" in seg:
            cfg = replace(cfg, access=_segment_value(seg["access"], ACCESS_CATALOG, "segments.access"))
        if "core" in seg:
            core = seg["core"]
            cfg = replace(cfg, core=CORE_PROFILE.watts_per_mbps if core == "core"
                          else _number(core, "segments.core"))
        if "local_dc" in seg:
            cfg = replace(cfg, local_dc=_segment_value(seg["local_dc"], DATA_CENTER_CATALOG,
                                                       "segments.local_dc"))
        if "remote_dc" in seg:
            cfg = replace(cfg, remote_dc=_segment_value(seg["remote_dc"], DATA_CENTER_CATALOG,
                                                        "segments.remote_dc"))
    if "caps" in raw:
        caps = raw["caps"]
        if not isinstance(caps, list):
            raise ConfigError("caps must be a list of numbers")
        cfg = replace(cfg, caps=tuple(_number(c, "cap") for c in caps))
    if "strategy" in raw:
        cfg = replace(cfg, strategy_spec=_strategy_spec_from_obj(raw["strategy"]))
    if "local_ci" in raw:
        cfg = replace(cfg, local_ci=_resolve(p, raw["local_ci"]))
    if "remote_ci" in raw:
        cfg = replace(cfg, remote_ci=_resolve(p, raw["remote_ci"]))
    if "reward_rate" in raw:
        rate = _number(raw["reward_rate"], "reward_rate")
        if rate < 0:
            raise ConfigError("reward_rate must be >= 0")
        cfg = replace(cfg, reward_rate=rate)
    if "out_dir" in raw:
        cfg = replace(cfg, out_dir=_resolve(p, raw["out_dir"]))
    if "cdn_grid" in raw:
        grid = tuple(str(g) for g in raw["cdn_grid"])
        bad = [g for g in grid if g not in DATA_CENTER_CATALOG]
        if bad:
            raise ConfigError(f"cdn_grid: unknown size(s) {bad}; "
                              f"choose from {sorted(DATA_CENTER_CATALOG)}")
        if not grid:
            raise ConfigError("cdn_grid must be non-empty")
        cfg = replace(cfg, cdn_grid=grid)
    return cfg


def _resolve(config_path: Path, value) -> Path:
    # Paths inside the config resolve against the config file's directory.
    v = Path(str(value))
    return v if v.is_absolute() else config_path.parent / v


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _round6(obj):
    """Copy a JSON-ish structure with floats cut to 6 significant digits."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round6(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round6(v) for v in obj]
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_round6(payload), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _schedule_csv_rows(schedule: Schedule):
    for d in schedule.days:
        yield (
            d.date.isoformat(),
            _fmt(d.ci_local),
            _fmt(d.ci_remote) if d.ci_remote is not None else "",
            d.cdn,
            d.tier.name,
            _fmt(d.effective_intensity),
            _fmt(d.budget_after),
        )


def _merged_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else DEFAULT_CONFIG
    if args.local_ci:
        cfg = replace(cfg, local_ci=Path(args.local_ci))
    if args.remote_ci:
        cfg = replace(cfg, remote_ci=Path(args.remote_ci))
    if args.cap:
        cfg = replace(cfg, caps=tuple(args.cap))
    if args.strategy:
        cfg = replace(cfg, strategy_spec=args.strategy)
    if args.out:
        cfg = replace(cfg, out_dir=Path(args.out))
    return cfg


def _load_series(cfg: RunConfig, need_remote: bool):
    if cfg.local_ci is None:
        raise ConfigError("no local intensity CSV given (--local-ci or config local_ci)")
    series_local = load_intensity_csv(cfg.local_ci)
    series_remote = None
    if cfg.remote_ci is not None:
        series_remote = load_intensity_csv(cfg.remote_ci)
    if need_remote and series_remote is None:
        raise ConfigError("this command needs a remote intensity CSV (--remote-ci)")
    return series_local, series_remote


def cmd_plan(args) -> int:
    cfg = _merged_config(args)
    if len(cfg.caps) != 1:
        raise ConfigError(f"plan needs exactly one cap, got {len(cfg.caps)}")
    series_local, series_remote = _load_series(cfg, need_remote=False)
    strategy = parse_strategy(cfg.strategy_spec, cfg.ladder)
    schedule = plan(
        series_local,
        ladder=cfg.ladder,
        cap=cfg.caps[0],
        strategy=strategy,
        profiles=cfg.profiles,
        series_remote=series_remote,
        dual_path=cfg.dual_path() if series_remote is not None else None,
    )

    payload = schedule.to_dict()
    payload["max_reduced_fraction"] = schedule.reduced_day_count / schedule.period_days
    if schedule.feasible and len(schedule.reduced_tier_names) <= 1:
        payload["plans"] = {
            p.label: synthesize(schedule, p, cfg.reward_rate).to_dict()
            for p in cfg.profiles
        }
    else:
        payload["plans"] = None
        payload["plans_note"] = (
            "two-tier terms not synthesized: schedule is infeasible"
            if not schedule.feasible
            else "two-tier terms need a single reduced tier; replan with a single-tier strategy"
        )

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(cfg.out_dir / "schedule.csv", CSV_COLUMNS, _schedule_csv_rows(schedule))
    _write_json(cfg.out_dir / "plan.json", payload)

    if not schedule.feasible:
        print(
            f"infeasible: budget goes negative on {len(schedule.infeasible_dates)} "
            f"day(s), first on {schedule.infeasible_dates[0]}; min budget "
            f"{_fmt(min(d.budget_after for d in schedule.days))}",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _merged_config(args)
    if not cfg.caps:
        raise ConfigError("sweep needs at least one cap (--cap, repeatable)")
    series_local, series_remote = _load_series(cfg, need_remote=False)
    strategy = parse_strategy(cfg.strategy_spec, cfg.ladder)
    result = sweep_caps(
        series_local,
        ladder=cfg.ladder,
        caps=cfg.caps,
        strategy=strategy,
        profiles=cfg.profiles,
        series_remote=series_remote,
        dual_path=cfg.dual_path() if series_remote is not None else None,
    )

    labels = [p.label for p in cfg.profiles]
    header = ("cap", "reduced_days", "avg_bitrate_reduction",
              *(f"total_loss_{lb}" for lb in labels),
              *(f"avg_reduction_{lb}" for lb in labels))
    rows = [
        (
            _fmt(e.cap), e.reduced_day_count, _fmt(e.avg_bitrate_reduction),
            *(_fmt(e.total_utility_loss[lb]) for lb in labels),
            *(_fmt(e.avg_utility_reduction[lb]) for lb in labels),
        )
        for e in result.entries
    ]
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(cfg.out_dir / "sweep.csv", header, rows)
    return EXIT_OK


def cmd_cdn_days(args) -> int:
    cfg = _merged_config(args)
    series_local, series_remote = _load_series(cfg, need_remote=True)
    rows = []
    for local_size, remote_size in product(cfg.cdn_grid, repeat=2):
        pair = DualPathConfig(
            access=cfg.access,
            core=cfg.core,
            local_dc=DATA_CENTER_CATALOG[local_size].watts_per_mbps,
            remote_dc=DATA_CENTER_CATALOG[remote_size].watts_per_mbps,
        )
        rows.append((local_size, remote_size,
                     count_remote_days(series_local, series_remote, pair)))
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(cfg.out_dir / "cdn_days.csv", ("local_dc", "remote_dc", "remote_days"), rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenstream",
        description="Carbon-aware streaming-quality planner and subscription synthesizer",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler, help_text in (
        ("plan", cmd_plan, "plan one period and synthesize two-tier terms"),
        ("sweep", cmd_sweep, "plan the same period under several caps"),
        ("cdn-days", cmd_cdn_days, "count remote-preferable days per CDN-size pair"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--local-ci", help="local region daily intensity CSV")
        p.add_argument("--remote-ci", help="remote region daily intensity CSV")
        p.add_argument("--cap", type=float, action="append",
                       help="average-intensity cap in gCO2e/kWh (repeatable)")
        p.add_argument("--strategy",
                       help="single-fhd | single:<tier> | mixed:<n>:<deep>:<rest>")
        p.add_argument("--out", help="output directory (default: out)")
        p.set_defaults(handler=handler)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_ERROR
    except (CsvParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
