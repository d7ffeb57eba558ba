import datetime as dt

import numpy as np
import pytest

from loadcast.grid import GridSpec, LoadSeries

# 2016-01-04 is a Monday, so day indices 5 and 6 of a week are the weekend
MONDAY = dt.date(2016, 1, 4)


@pytest.fixture
def grid() -> GridSpec:
    return GridSpec()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def make_series(
    n_days: int,
    seed: int = 0,
    start: dt.date = MONDAY,
    grid: GridSpec | None = None,
    base: float = 0.5,
    amplitude: float = 0.3,
    noise: float = 0.02,
) -> LoadSeries:
    """Smooth daily-periodic series with mild noise, strictly positive."""
    grid = grid or GridSpec()
    k = grid.intervals_per_day
    rng = np.random.default_rng(seed)
    slot = np.arange(k) / k
    profile = base + amplitude * np.sin(2 * np.pi * slot - 0.7) ** 2
    days = np.tile(profile, (n_days, 1))
    days = days + rng.normal(0.0, noise, size=days.shape)
    return LoadSeries.from_days(np.clip(days, 0.0, None), grid, start)


@pytest.fixture
def series30() -> LoadSeries:
    return make_series(30)


@pytest.fixture
def series12() -> LoadSeries:
    return make_series(12)
