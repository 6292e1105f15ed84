"""Path power, downgrade savings, and per-segment shares."""
import numpy as np
import pytest

from greenstream import (
    ACCESS_CATALOG,
    CORE_PROFILE,
    DATA_CENTER_CATALOG,
    PathProfile,
    QualityTier,
    SegmentProfile,
    builtin_path,
    energy_reduction,
    path_power,
    segment_shares,
)

EXPECTED_ACCESS = {
    "wired": 0.02,
    "4g_suburban": 1.5,
    "4g_dense_urban": 8.86,
    "4g_wilderness": 14.9,
    "5g_dense_urban": 4.2,
    "5g_wilderness": 6.3,
    "6g": 0.42,
}
EXPECTED_DC = {"very_large": 0.01, "large": 0.025, "medium": 0.05, "small": 0.09}


def test_catalog_values_exact():
    assert CORE_PROFILE.watts_per_mbps == 0.03
    for name, value in EXPECTED_ACCESS.items():
        assert ACCESS_CATALOG[name].watts_per_mbps == value
    for name, value in EXPECTED_DC.items():
        assert DATA_CENTER_CATALOG[name].watts_per_mbps == value


def test_path_power(ladder):
    broadband = builtin_path("wired", "small")
    assert path_power(broadband, 20.0) == pytest.approx(2.8, abs=1e-12)
    assert path_power(broadband, 0.0) == 0.0
    mobile = builtin_path("4g_dense_urban", "small")
    assert path_power(mobile, 1.0) == pytest.approx(8.98, abs=1e-12)
    with pytest.raises(ValueError):
        path_power(broadband, -1.0)


def test_energy_reduction_broadband(ladder):
    four_k, fhd, _ = ladder.tiers
    r = energy_reduction(builtin_path("wired", "small"), four_k, fhd)
    assert r.total == pytest.approx(1.68, abs=1e-12)
    assert r.access == pytest.approx(0.24, abs=1e-12)
    assert r.core == pytest.approx(0.36, abs=1e-12)
    assert r.data_center == pytest.approx(1.08, abs=1e-12)
    assert r.access / r.total == pytest.approx(0.143, abs=0.001)
    assert r.core / r.total == pytest.approx(0.214, abs=0.001)
    assert r.data_center / r.total == pytest.approx(0.643, abs=0.001)


def test_mobile_access_dominates_reduction(ladder):
    four_k, fhd, _ = ladder.tiers
    r4g = energy_reduction(builtin_path("4g_dense_urban", "small"), four_k, fhd)
    assert r4g.access / r4g.total > 0.985
    r5g = energy_reduction(builtin_path("5g_dense_urban", "small"), four_k, fhd)
    assert r5g.access / r5g.total > 0.97


def test_energy_reduction_identity_and_errors(ladder):
    four_k, _, hd = ladder.tiers
    r = energy_reduction(builtin_path(), four_k, four_k)
    assert r.access == r.core == r.data_center == 0.0
    with pytest.raises(ValueError):
        energy_reduction(builtin_path(), hd, four_k)


def test_energy_reduction_additive(ladder):
    four_k, fhd, hd = ladder.tiers
    path = builtin_path("5g_dense_urban", "medium")
    full = energy_reduction(path, four_k, hd)
    step1 = energy_reduction(path, four_k, fhd)
    step2 = energy_reduction(path, fhd, hd)
    for attr in ("access", "core", "data_center"):
        assert getattr(full, attr) == pytest.approx(
            getattr(step1, attr) + getattr(step2, attr), abs=1e-12
        )


def test_segment_shares_known_paths():
    shares = segment_shares(builtin_path("wired", "very_large"))
    assert shares["access"] == pytest.approx(1 / 3, abs=1e-12)
    assert shares["core"] == pytest.approx(1 / 2, abs=1e-12)
    assert shares["data_center"] == pytest.approx(1 / 6, abs=1e-12)
    shares = segment_shares(builtin_path("5g_dense_urban", "small"))
    assert shares["access"] == pytest.approx(4.2 / 4.32, abs=1e-12)


def test_segment_shares_symmetric_and_degenerate():
    same = PathProfile(
        SegmentProfile("access", "a", 0.5),
        SegmentProfile("core", "c", 0.5),
        SegmentProfile("data_center", "d", 0.5),
    )
    assert all(v == pytest.approx(1 / 3, abs=1e-12) for v in segment_shares(same).values())
    zero = PathProfile(
        SegmentProfile("access", "a", 0.0),
        SegmentProfile("core", "c", 0.0),
        SegmentProfile("data_center", "d", 0.0),
    )
    with pytest.raises(ValueError):
        segment_shares(zero)


def test_shares_sum_to_one_and_match_any_tier_pair(ladder):
    rng = np.random.default_rng(7)
    for _ in range(50):
        a, c, d = rng.uniform(0.001, 20.0, size=3)
        path = PathProfile(
            SegmentProfile("access", "a", float(a)),
            SegmentProfile("core", "c", float(c)),
            SegmentProfile("data_center", "d", float(d)),
        )
        shares = segment_shares(path)
        assert abs(sum(shares.values()) - 1.0) < 1e-12
        hi = float(rng.uniform(5.0, 50.0))
        lo = float(rng.uniform(0.5, hi - 0.1))
        r = energy_reduction(path, QualityTier("hi", hi), QualityTier("lo", lo))
        assert r.access / r.total == pytest.approx(shares["access"], abs=1e-12)
        assert r.core / r.total == pytest.approx(shares["core"], abs=1e-12)
        assert r.data_center / r.total == pytest.approx(shares["data_center"], abs=1e-12)


def test_path_profile_kind_enforcement():
    with pytest.raises(ValueError):
        PathProfile(CORE_PROFILE, CORE_PROFILE, DATA_CENTER_CATALOG["small"])
    with pytest.raises(ValueError):
        SegmentProfile("uplink", "x", 1.0)
    with pytest.raises(ValueError):
        SegmentProfile("access", "x", -1.0)
    with pytest.raises(KeyError):
        builtin_path("7g", "small")
