"""Behavioral load features computed per interval on the continuous timeline.

Six derived signals summarize household activity around each interval:

* ``rolling_sum``       trailing sum over a fixed window of intervals
* ``hourly_total``      total load of the clock hour containing the interval
* ``rel_consumption``   interval load relative to the total load of its day
* ``hourly_diff``       difference between the last two clock-hour totals
* ``low_flag``          1 when the load is below a fraction of the daily mean
* ``high_flag``         1 when the load exceeds a multiple of the daily mean

Every signal exists in two variants. The plain columns use complete-day
information (full clock hours, full-day totals and means) and are the right
values for lagged lookups into finished days. The ``_todate`` columns use only
measurements up to and including the interval itself: hour totals cover only
the elapsed part of the hour, day totals and means are cumulative. They are
what a forecaster can actually observe mid-day, so boundary lookups on the
in-progress day go through them. At the last interval of a day the two
variants coincide. ``rolling_sum`` is trailing either way and has no separate
variant.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .grid import GridSpec, LoadSeries, day_type_flag

BEHAVIOR_FEATURES = (
    "rolling_sum",
    "hourly_total",
    "rel_consumption",
    "hourly_diff",
    "low_flag",
    "high_flag",
)

_LIVE_VARIANT = {
    "rolling_sum": "rolling_sum",
    "hourly_total": "hourly_total_todate",
    "rel_consumption": "rel_consumption_todate",
    "hourly_diff": "hourly_diff_todate",
    "low_flag": "low_flag_todate",
    "high_flag": "high_flag_todate",
}

FEATURE_COLUMNS = (
    "day_type",
    *BEHAVIOR_FEATURES,
    "hourly_total_todate",
    "rel_consumption_todate",
    "hourly_diff_todate",
    "low_flag_todate",
    "high_flag_todate",
)


@dataclass(frozen=True)
class FeatureConfig:
    """Window sizes and thresholds for the behavioral features."""

    rolling_sum_window: int = 8
    low_flag_ratio: float = 0.2
    high_flag_ratio: float = 1.5
    epsilon_div: float = 1e-9

    def __post_init__(self) -> None:
        if self.rolling_sum_window < 1:
            raise ValueError("rolling_sum_window must be at least 1")
        if not 0 < self.low_flag_ratio < 1:
            raise ValueError("low_flag_ratio must lie in (0, 1)")
        if self.high_flag_ratio <= 1:
            raise ValueError("high_flag_ratio must exceed 1")
        if self.epsilon_div <= 0:
            raise ValueError("epsilon_div must be positive")


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-interval feature values, one row per interval of the source series."""

    data: np.ndarray
    grid: GridSpec
    config: FeatureConfig
    columns: tuple[str, ...] = field(default=FEATURE_COLUMNS)

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[1] != len(self.columns):
            raise ValueError("data shape must be (intervals, columns)")
        if not np.all(np.isfinite(data)):
            raise ValueError("feature values must be finite")
        flags = [i for i, c in enumerate(self.columns) if "flag" in c or c == "day_type"]
        if not np.isin(data[:, flags], (0.0, 1.0)).all():
            raise ValueError("flag columns must be 0 or 1")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def behavior_row(self, index: int) -> np.ndarray:
        """Complete-day feature vector at a flat interval index."""
        cols = [self.columns.index(c) for c in BEHAVIOR_FEATURES]
        return self.data[index, cols]

    def behavior_row_todate(self, index: int) -> np.ndarray:
        """Feature vector at a flat index using only data observed up to it."""
        cols = [self.columns.index(_LIVE_VARIANT[c]) for c in BEHAVIOR_FEATURES]
        return self.data[index, cols]


def _guarded_ratio(num: np.ndarray, den: np.ndarray, eps: float) -> np.ndarray:
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den >= eps)
    return out


def compute_features(series: LoadSeries, config: FeatureConfig | None = None) -> FeatureMatrix:
    """Evaluate all feature columns for every interval of the series.

    Rolling sums and hour differences run on the continuous timeline and cross
    day boundaries; they are zero-padded only before the start of the series.
    Day-scoped quantities never look outside their own day.
    """
    config = config or FeatureConfig()
    grid = series.grid
    k = grid.intervals_per_day
    if 60 % grid.interval_minutes != 0:
        raise ValueError("hourly features need an interval length that divides one hour")
    per_hour = 60 // grid.interval_minutes
    if series.n_days < 2:
        raise ValueError("feature computation needs at least 2 days of data")

    y = series.values
    n = y.size
    days = series.n_days

    csum = np.concatenate([[0.0], np.cumsum(y)])
    hi = np.arange(1, n + 1)
    rolling = csum[hi] - csum[np.maximum(hi - config.rolling_sum_window, 0)]

    by_hour = y.reshape(n // per_hour, per_hour)
    hour_totals = by_hour.sum(axis=1)
    prev_hour = np.concatenate([[0.0], hour_totals[:-1]])
    hourly_total = np.repeat(hour_totals, per_hour)
    hourly_total_todate = by_hour.cumsum(axis=1).ravel()
    hourly_diff = np.repeat(hour_totals - prev_hour, per_hour)
    hourly_diff_todate = hourly_total_todate - np.repeat(prev_hour, per_hour)

    by_day = y.reshape(days, k)
    day_totals = np.repeat(by_day.sum(axis=1), k)
    day_cum = by_day.cumsum(axis=1).ravel()
    rel = _guarded_ratio(y, day_totals, config.epsilon_div)
    rel_todate = _guarded_ratio(y, day_cum, config.epsilon_div)

    day_mean = day_totals / k
    mean_todate = day_cum / np.tile(np.arange(1.0, k + 1.0), days)
    low = (y < config.low_flag_ratio * day_mean).astype(float)
    high = (y > config.high_flag_ratio * day_mean).astype(float)
    low_todate = (y < config.low_flag_ratio * mean_todate).astype(float)
    high_todate = (y > config.high_flag_ratio * mean_todate).astype(float)

    day_type = np.repeat([float(day_type_flag(d)) for d in series.day_dates], k)

    data = np.column_stack(
        [
            day_type,
            rolling,
            hourly_total,
            rel,
            hourly_diff,
            low,
            high,
            hourly_total_todate,
            rel_todate,
            hourly_diff_todate,
            low_todate,
            high_todate,
        ]
    )
    return FeatureMatrix(data, grid, config)


def features_at_boundary(fm: FeatureMatrix, day: int, boundary: int) -> np.ndarray:
    """Observable feature vector at the last measured interval before a boundary.

    ``boundary`` is an update-period boundary of ``day`` (0, K_h, 2*K_h, ...,
    up to K). The returned vector is the to-date variant evaluated at interval
    ``boundary - 1`` of the day; boundary 0 wraps to the last interval of the
    previous day.
    """
    k = fm.grid.intervals_per_day
    kh = fm.grid.intervals_per_update
    if not 0 <= boundary <= k or boundary % kh != 0:
        raise ValueError(f"not an update boundary: {boundary}")
    index = day * k + boundary - 1
    if index < 0:
        raise ValueError("boundary lookup reaches before the start of the series")
    if index >= fm.n_rows:
        raise ValueError("boundary lookup reaches past the end of the series")
    return fm.behavior_row_todate(index)


def write_features_csv(fm: FeatureMatrix, series: LoadSeries, path: str) -> None:
    """Debug dump of the feature matrix, one row per interval."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("timestamp", *fm.columns))
        for g in range(fm.n_rows):
            writer.writerow(
                (series.timestamp_at(g).isoformat(), *(repr(float(v)) for v in fm.data[g]))
            )
