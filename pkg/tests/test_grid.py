import datetime as dt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loadcast.grid import (
    GridSpec,
    LoadSeries,
    day_slice,
    day_type_flag,
    update_boundaries,
)

from conftest import MONDAY, make_series


class TestGridSpec:
    def test_defaults(self):
        grid = GridSpec()
        assert grid.intervals_per_day == 96
        assert grid.intervals_per_update == 16
        assert grid.updates_per_day == 6

    @pytest.mark.parametrize("minutes", [7, 13, 25, 1441], ids=repr)
    def test_rejects_interval_not_dividing_day(self, minutes):
        with pytest.raises(ValueError):
            GridSpec(interval_minutes=minutes)

    def test_rejects_update_not_tiling_day(self):
        with pytest.raises(ValueError):
            GridSpec(update_period_hours=5.0)

    def test_rejects_update_not_whole_intervals(self):
        with pytest.raises(ValueError):
            GridSpec(interval_minutes=60, update_period_hours=1.5)

    def test_coarser_grid(self):
        grid = GridSpec(interval_minutes=60, update_period_hours=6.0)
        assert grid.intervals_per_day == 24
        assert grid.intervals_per_update == 6
        assert grid.updates_per_day == 4


class TestUpdateBoundaries:
    @pytest.mark.parametrize(
        "t, expected",
        [(0, (0, 16)), (15, (0, 16)), (16, (16, 32)), (50, (48, 64)), (95, (80, 96))],
        ids=repr,
    )
    def test_known_points(self, grid, t, expected):
        assert update_boundaries(grid, t) == expected

    @given(t=st.integers(min_value=0, max_value=95))
    def test_properties(self, t):
        grid = GridSpec()
        prev, nxt = update_boundaries(grid, t)
        assert prev <= t < nxt
        assert prev % grid.intervals_per_update == 0
        assert nxt - prev <= grid.intervals_per_update
        assert nxt <= grid.intervals_per_day

    def test_out_of_range(self, grid):
        with pytest.raises(ValueError):
            update_boundaries(grid, 96)
        with pytest.raises(ValueError):
            update_boundaries(grid, -1)


class TestDayType:
    @pytest.mark.parametrize(
        "date, flag",
        [
            (dt.date(2016, 1, 4), 0),  # Monday
            (dt.date(2016, 1, 8), 0),  # Friday
            (dt.date(2016, 1, 9), 1),  # Saturday
            (dt.date(2016, 1, 10), 1),  # Sunday
        ],
        ids=str,
    )
    def test_flags(self, date, flag):
        assert day_type_flag(date) == flag


class TestLoadSeries:
    def test_values_read_only(self, series12):
        with pytest.raises(ValueError):
            series12.values[0] = 1.0

    def test_rejects_partial_day(self, grid):
        with pytest.raises(ValueError):
            LoadSeries(np.ones(100), grid, (MONDAY, MONDAY + dt.timedelta(days=1)))

    def test_rejects_negative(self, grid):
        values = np.ones(96)
        values[3] = -0.1
        with pytest.raises(ValueError):
            LoadSeries(values, grid, (MONDAY,))

    def test_rejects_non_increasing_dates(self, grid):
        with pytest.raises(ValueError):
            LoadSeries(np.ones(192), grid, (MONDAY, MONDAY))

    def test_day_matrix_round_trip(self, series12):
        mat = series12.day_matrix()
        assert mat.shape == (12, 96)
        assert np.array_equal(mat.ravel(), series12.values)

    def test_day_type_uses_dates(self):
        series = make_series(9)  # Monday through next Tuesday
        assert [series.day_type(d) for d in range(9)] == [0, 0, 0, 0, 0, 1, 1, 0, 0]

    @given(index=st.integers(min_value=0, max_value=12 * 96 - 1))
    def test_timestamp_index_round_trip(self, index):
        series = make_series(12)
        assert series.index_of(series.timestamp_at(index)) == index

    def test_index_of_rejects_off_grid(self, series12):
        with pytest.raises(ValueError):
            series12.index_of(dt.datetime(2016, 1, 4, 0, 7))

    def test_index_of_rejects_outside(self, series12):
        with pytest.raises(ValueError):
            series12.index_of(dt.datetime(2015, 12, 31, 0, 0))

    def test_prefix(self, series12):
        pre = series12.prefix(5)
        assert pre.n_days == 5
        assert np.array_equal(pre.values, series12.values[: 5 * 96])
        assert pre.day_dates == series12.day_dates[:5]

    def test_prefix_out_of_range(self, series12):
        with pytest.raises(ValueError):
            series12.prefix(0)
        with pytest.raises(ValueError):
            series12.prefix(13)

    def test_day_slice(self, series12):
        assert np.array_equal(day_slice(series12, 3), series12.values[3 * 96 : 4 * 96])
        with pytest.raises(IndexError):
            day_slice(series12, 12)

    def test_gapped_dates_allowed(self, grid):
        # ingestion can drop a day in the middle; indices stay contiguous
        dates = (MONDAY, MONDAY + dt.timedelta(days=2))
        series = LoadSeries(np.ones(192), grid, dates)
        assert series.n_days == 2
        assert series.timestamp_at(96) == dt.datetime(2016, 1, 6)
