"""Shared fixtures and independent helpers for the test suite."""
from __future__ import annotations

import datetime as dt
import sys

import pytest

from greenstream import (
    DEFAULT_LADDER,
    GREEN_USER,
    HIGH_QUALITY_USER,
    CarbonIntensitySeries,
    DualPathConfig,
)

START = dt.date(2024, 12, 1)


def make_series(values, region: str = "test", start: dt.date = START) -> CarbonIntensitySeries:
    dates = tuple(start + dt.timedelta(days=i) for i in range(len(values)))
    return CarbonIntensitySeries(region, dates, tuple(float(v) for v in values))


def forcing_series(reduce_on, days: int, cap: float, tier_ratios,
                   start: dt.date = START) -> CarbonIntensitySeries:
    """Series that forces reductions exactly on the given day indexes.

    Independent oracle: walks the budget recurrence directly (credit the
    cap, debit the day's effective intensity). A forced day gets an
    intensity one unit beyond what the running budget can absorb at full
    quality; every other day gets an intensity equal to the cap, which
    leaves the budget untouched. tier_ratios lists, per reduction event in
    order, the reduced tier's bitrate as a fraction of the top bitrate.
    """
    reduce_set = set(reduce_on)
    assert len(tier_ratios) == len(reduce_set)
    values = []
    budget = 0.0
    event = 0
    for i in range(days):
        if i in reduce_set:
            ci = cap + budget + 1.0
            budget = budget + cap - ci * tier_ratios[event]
            event += 1
        else:
            ci = cap
        assert budget >= 0, "oracle construction must stay feasible"
        values.append(ci)
    return make_series(values, start=start)


@pytest.fixture
def ladder():
    return DEFAULT_LADDER


@pytest.fixture
def hq():
    return HIGH_QUALITY_USER


@pytest.fixture
def green():
    return GREEN_USER


@pytest.fixture
def dual_cfg():
    # wired access, core, small local DC, very large remote DC
    return DualPathConfig(access=0.02, core=0.03, local_dc=0.09, remote_dc=0.01)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance criteria verdicts at the end of the run."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
