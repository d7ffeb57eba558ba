import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loadcast.features import (
    BEHAVIOR_FEATURES,
    FEATURE_COLUMNS,
    FeatureConfig,
    compute_features,
    features_at_boundary,
)
from loadcast.grid import GridSpec, LoadSeries

from conftest import MONDAY, make_series
import oracles


@pytest.fixture(scope="module")
def fm_and_series():
    series = make_series(6, seed=7)
    return compute_features(series), series


class TestAgainstOracles:
    def test_rolling_sum(self, fm_and_series):
        fm, series = fm_and_series
        expected = oracles.oracle_rolling_sum(series.values, 8)
        np.testing.assert_allclose(fm.column("rolling_sum"), expected, rtol=1e-12)

    def test_hourly_total(self, fm_and_series):
        fm, series = fm_and_series
        expected = oracles.oracle_hourly_total(series.values, 4)
        np.testing.assert_allclose(fm.column("hourly_total"), expected, rtol=1e-12)

    def test_hourly_total_todate(self, fm_and_series):
        fm, series = fm_and_series
        expected = oracles.oracle_hourly_total_todate(series.values, 4)
        np.testing.assert_allclose(fm.column("hourly_total_todate"), expected, rtol=1e-12)

    def test_rel_consumption(self, fm_and_series):
        fm, series = fm_and_series
        day = oracles.oracle_day_total(series.values, 96)
        expected = [
            oracles.oracle_ratio(y, d, 1e-9) for y, d in zip(series.values, day)
        ]
        np.testing.assert_allclose(fm.column("rel_consumption"), expected, rtol=1e-12)

    def test_rel_consumption_todate(self, fm_and_series):
        fm, series = fm_and_series
        day = oracles.oracle_day_total_todate(series.values, 96)
        expected = [
            oracles.oracle_ratio(y, d, 1e-9) for y, d in zip(series.values, day)
        ]
        np.testing.assert_allclose(
            fm.column("rel_consumption_todate"), expected, rtol=1e-12
        )

    def test_hourly_diff(self, fm_and_series):
        fm, series = fm_and_series
        hour = oracles.oracle_hourly_total(series.values, 4)
        expected = hour.copy()  # no previous hour at the series start
        expected[4:] = hour[4:] - hour[:-4]
        np.testing.assert_allclose(fm.column("hourly_diff"), expected, rtol=1e-12)

    def test_hourly_diff_todate(self, fm_and_series):
        fm, series = fm_and_series
        live = oracles.oracle_hourly_total_todate(series.values, 4)
        full = oracles.oracle_hourly_total(series.values, 4)
        expected = live.copy()
        expected[4:] = live[4:] - full[:-4]
        np.testing.assert_allclose(fm.column("hourly_diff_todate"), expected, rtol=1e-12)

    def test_flags(self, fm_and_series):
        fm, series = fm_and_series
        k = 96
        day_mean = oracles.oracle_day_total(series.values, k) / k
        np.testing.assert_array_equal(
            fm.column("low_flag"), (series.values < 0.2 * day_mean).astype(float)
        )
        np.testing.assert_array_equal(
            fm.column("high_flag"), (series.values > 1.5 * day_mean).astype(float)
        )

    def test_flags_todate(self, fm_and_series):
        fm, series = fm_and_series
        mean_live = oracles.oracle_day_mean_todate(series.values, 96)
        np.testing.assert_array_equal(
            fm.column("low_flag_todate"), (series.values < 0.2 * mean_live).astype(float)
        )
        np.testing.assert_array_equal(
            fm.column("high_flag_todate"),
            (series.values > 1.5 * mean_live).astype(float),
        )


class TestStructure:
    def test_column_names(self, fm_and_series):
        fm, _ = fm_and_series
        assert fm.columns == FEATURE_COLUMNS
        assert set(BEHAVIOR_FEATURES) < set(FEATURE_COLUMNS)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rolling_sum_window": 0},
            {"low_flag_ratio": 1.2},
            {"high_flag_ratio": 0.9},
            {"epsilon_div": 0.0},
        ],
        ids=repr,
    )
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            FeatureConfig(**kwargs)

    def test_day_type_column(self):
        series = make_series(8)  # starts Monday
        fm = compute_features(series)
        per_day = fm.column("day_type").reshape(8, 96)
        assert np.array_equal(per_day.min(axis=1), per_day.max(axis=1))
        assert list(per_day[:, 0]) == [0, 0, 0, 0, 0, 1, 1, 0]

    def test_rolling_sum_crosses_days(self, grid):
        values = np.zeros(2 * 96)
        values[95] = 2.0  # last interval of day 0
        dates = (MONDAY, MONDAY + dt.timedelta(days=1))
        fm = compute_features(LoadSeries(values, grid, dates))
        # window 8 still sees the spike for the first 7 intervals of day 1
        assert fm.column("rolling_sum")[96 + 6] == 2.0
        assert fm.column("rolling_sum")[96 + 7] == 0.0

    def test_zero_day_has_zero_ratio(self, grid):
        values = np.concatenate([np.zeros(96), np.ones(96)])
        dates = (MONDAY, MONDAY + dt.timedelta(days=1))
        fm = compute_features(LoadSeries(values, grid, dates))
        assert np.all(fm.column("rel_consumption")[:96] == 0.0)
        assert np.all(fm.column("rel_consumption_todate")[:96] == 0.0)

    def test_flags_never_both(self, fm_and_series):
        fm, _ = fm_and_series
        assert np.all(fm.column("low_flag") * fm.column("high_flag") == 0.0)
        assert np.all(fm.column("low_flag_todate") * fm.column("high_flag_todate") == 0.0)

    def test_todate_matches_full_at_day_end(self, fm_and_series):
        fm, series = fm_and_series
        ends = np.arange(96 - 1, series.values.size, 96)
        for live, full in [
            ("hourly_total_todate", "hourly_total"),
            ("rel_consumption_todate", "rel_consumption"),
            ("hourly_diff_todate", "hourly_diff"),
            ("low_flag_todate", "low_flag"),
            ("high_flag_todate", "high_flag"),
        ]:
            np.testing.assert_allclose(
                fm.column(live)[ends], fm.column(full)[ends], rtol=1e-12
            )


class TestBoundaryLookup:
    def test_matches_row_lookup(self, fm_and_series):
        fm, series = fm_and_series
        for day in range(1, 6):
            for boundary in (0, 16, 48, 96):
                got = features_at_boundary(fm, day, boundary)
                np.testing.assert_array_equal(
                    got, fm.behavior_row_todate(day * 96 + boundary - 1)
                )

    def test_boundary_zero_wraps_to_previous_day(self, fm_and_series):
        fm, _ = fm_and_series
        np.testing.assert_array_equal(
            features_at_boundary(fm, 3, 0), fm.behavior_row_todate(3 * 96 - 1)
        )

    def test_rejects_day_zero_boundary_zero(self, fm_and_series):
        fm, _ = fm_and_series
        with pytest.raises(ValueError):
            features_at_boundary(fm, 0, 0)

    def test_rejects_non_boundary(self, fm_and_series):
        fm, _ = fm_and_series
        with pytest.raises(ValueError):
            features_at_boundary(fm, 1, 7)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_oracle_equivalence_random_series(seed):
    grid = GridSpec(interval_minutes=60)  # smaller day keeps the oracle fast
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.0, 2.0, size=3 * grid.intervals_per_day)
    dates = tuple(MONDAY + dt.timedelta(days=i) for i in range(3))
    fm = compute_features(LoadSeries(values, grid, dates))
    per_hour = 60 // grid.interval_minutes
    np.testing.assert_allclose(
        fm.column("rolling_sum"),
        oracles.oracle_rolling_sum(values, 8),
        rtol=1e-12,
        atol=1e-12,
    )
    np.testing.assert_allclose(
        fm.column("hourly_total"),
        oracles.oracle_hourly_total(values, per_hour),
        rtol=1e-12,
        atol=1e-12,
    )
    np.testing.assert_allclose(
        fm.column("hourly_total_todate"),
        oracles.oracle_hourly_total_todate(values, per_hour),
        rtol=1e-12,
        atol=1e-12,
    )
