"""Uniform-grid load series with calendar day indexing."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

MINUTES_PER_DAY = 1440


class DayType(IntEnum):
    WORKDAY = 0
    WEEKEND = 1


def day_type_flag(day: dt.date) -> int:
    """1 for Saturday/Sunday, 0 for Monday through Friday."""
    return int(day.weekday() >= 5)


@dataclass(frozen=True)
class GridSpec:
    """Measurement grid: interval length in minutes plus the forecast update period."""

    interval_minutes: int = 15
    update_period_hours: float = 4.0

    def __post_init__(self) -> None:
        if self.interval_minutes < 1 or MINUTES_PER_DAY % self.interval_minutes != 0:
            raise ValueError(
                f"interval_minutes must divide {MINUTES_PER_DAY}, got {self.interval_minutes}"
            )
        exact = self.update_period_hours * 60.0 / self.interval_minutes
        if exact < 1 or abs(exact - round(exact)) > 1e-9:
            raise ValueError(
                "update_period_hours must span a whole number of intervals, "
                f"got {self.update_period_hours}h on a {self.interval_minutes}min grid"
            )
        if self.intervals_per_day % int(round(exact)) != 0:
            raise ValueError("update periods must tile the day exactly")

    @property
    def intervals_per_day(self) -> int:
        return MINUTES_PER_DAY // self.interval_minutes

    @property
    def intervals_per_update(self) -> int:
        return int(round(self.update_period_hours * 60.0 / self.interval_minutes))

    @property
    def updates_per_day(self) -> int:
        return self.intervals_per_day // self.intervals_per_update


def update_boundaries(grid: GridSpec, t: int) -> tuple[int, int]:
    """Enclosing update-period boundaries (previous, next) for interval t of a day.

    The previous boundary is the most recent interval index at which forecasts
    were refreshed; the next one is capped at the end of the day.
    """
    k = grid.intervals_per_day
    if not 0 <= t < k:
        raise ValueError(f"interval index out of range: {t}")
    kh = grid.intervals_per_update
    prev = (t // kh) * kh
    return prev, min(prev + kh, k)


@dataclass(frozen=True)
class LoadSeries:
    """Immutable flat array of interval loads covering whole days.

    ``values[d * K + t]`` is the load of interval ``t`` on day ``d``, where
    ``K`` is ``grid.intervals_per_day``. ``day_dates`` records the calendar
    date of every stored day; dates stay truthful even when ingestion dropped
    unrepairable days in the middle of a file, so day indices are always
    contiguous while the calendar may not be.
    """

    values: np.ndarray
    grid: GridSpec
    day_dates: tuple[dt.date, ...]

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        k = self.grid.intervals_per_day
        if vals.ndim != 1 or vals.size == 0 or vals.size % k != 0:
            raise ValueError("values must be a non-empty flat array of whole days")
        if vals.size // k != len(self.day_dates):
            raise ValueError("day_dates length must match the number of stored days")
        if any(b <= a for a, b in zip(self.day_dates, self.day_dates[1:])):
            raise ValueError("day_dates must be strictly increasing")
        if not np.all(np.isfinite(vals)):
            raise ValueError("loads must be finite")
        if np.any(vals < 0):
            raise ValueError("loads must be non-negative")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "day_dates", tuple(self.day_dates))

    @classmethod
    def from_days(cls, day_values: np.ndarray, grid: GridSpec, start: dt.date) -> "LoadSeries":
        """Build a series from a (days, K) matrix on consecutive calendar dates."""
        day_values = np.asarray(day_values, dtype=float)
        if day_values.ndim != 2 or day_values.shape[1] != grid.intervals_per_day:
            raise ValueError("day_values must be (days, intervals_per_day)")
        dates = tuple(start + dt.timedelta(days=i) for i in range(day_values.shape[0]))
        return cls(day_values.ravel(), grid, dates)

    @property
    def n_days(self) -> int:
        return len(self.day_dates)

    @property
    def start_timestamp(self) -> dt.datetime:
        return dt.datetime.combine(self.day_dates[0], dt.time())

    def day_matrix(self) -> np.ndarray:
        return self.values.reshape(self.n_days, self.grid.intervals_per_day)

    def day_type(self, day: int) -> int:
        return day_type_flag(self.day_dates[day])

    def timestamp_at(self, index: int) -> dt.datetime:
        d, t = divmod(int(index), self.grid.intervals_per_day)
        return dt.datetime.combine(self.day_dates[d], dt.time()) + dt.timedelta(
            minutes=t * self.grid.interval_minutes
        )

    def index_of(self, when: dt.datetime) -> int:
        """Flat interval index of a grid-aligned timestamp inside the series."""
        offset = when.hour * 60 + when.minute
        if when.second or when.microsecond or offset % self.grid.interval_minutes:
            raise ValueError(f"timestamp not grid aligned: {when.isoformat()}")
        try:
            day = self.day_dates.index(when.date())
        except ValueError:
            raise ValueError(f"timestamp outside the series: {when.isoformat()}") from None
        return day * self.grid.intervals_per_day + offset // self.grid.interval_minutes

    def prefix(self, n_days: int) -> "LoadSeries":
        """First n_days of the series as an independent series."""
        if not 1 <= n_days <= self.n_days:
            raise ValueError(f"prefix length out of range: {n_days}")
        k = self.grid.intervals_per_day
        return LoadSeries(self.values[: n_days * k], self.grid, self.day_dates[:n_days])

    def with_values(self, values: np.ndarray) -> "LoadSeries":
        return LoadSeries(values, self.grid, self.day_dates)


def day_slice(series: LoadSeries, day: int) -> np.ndarray:
    """Read-only view of one day of loads."""
    if not 0 <= day < series.n_days:
        raise IndexError(f"day index out of range: {day}")
    k = series.grid.intervals_per_day
    return series.values[day * k : (day + 1) * k]
