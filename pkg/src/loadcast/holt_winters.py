"""Additive Holt-Winters smoothing with a daily seasonal cycle.

State is (level, trend, seasonal buffer, cursor). The cursor is the flat index
of the last consumed interval; the seasonal buffer holds one value per
interval of the day, each being the most recent update for its slot. The
three smoothing gains are chosen by a coarse grid search over (0, 1)^3
followed by a finer local grid around the coarse optimum, both scored on the
one-step-ahead sum of squared errors over the training data.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ._kernels import hw_advance, hw_scan_sse, hw_scan_sse_batch
from .grid import LoadSeries


@dataclass(frozen=True)
class HoltWintersParams:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        for name, v in (("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class HoltWintersState:
    level: float
    trend: float
    seasonal: np.ndarray
    cursor: int

    def __post_init__(self) -> None:
        seasonal = np.asarray(self.seasonal, dtype=float).copy()
        if seasonal.ndim != 1 or seasonal.size < 1:
            raise ValueError("seasonal buffer must be a non-empty vector")
        seasonal.setflags(write=False)
        object.__setattr__(self, "seasonal", seasonal)

    @property
    def season_len(self) -> int:
        return self.seasonal.size


def hw_init(series: LoadSeries, warmup_days: int = 2) -> HoltWintersState:
    """Initial state from the first two days.

    Level is the mean of day 0, trend the per-interval mean increase from day
    0 to day 1, and the seasonal buffer is day 0 centered on its mean. The
    cursor points at the end of day 0, so updates consume day 1 onward.
    """
    if warmup_days < 2:
        raise ValueError("initialization needs a warmup of at least 2 days")
    if series.n_days < 2:
        raise ValueError("initialization needs at least 2 days of data")
    k = series.grid.intervals_per_day
    day0 = series.values[:k]
    day1 = series.values[k : 2 * k]
    level = float(day0.mean())
    trend = float((day1.mean() - day0.mean()) / k)
    return HoltWintersState(level, trend, day0 - level, k - 1)


def hw_update(state: HoltWintersState, y: float, params: HoltWintersParams) -> HoltWintersState:
    """Consume one measured interval and return the advanced state."""
    if not np.isfinite(y):
        raise ValueError(f"measurement must be finite, got {y}")
    cursor = state.cursor + 1
    slot = cursor % state.season_len
    s_old = state.seasonal[slot]
    level = params.alpha * (y - s_old) + (1.0 - params.alpha) * (state.level + state.trend)
    trend = params.beta * (level - state.level) + (1.0 - params.beta) * state.trend
    seasonal = state.seasonal.copy()
    seasonal[slot] = (
        params.gamma * (y - state.level - state.trend) + (1.0 - params.gamma) * s_old
    )
    return HoltWintersState(level, trend, seasonal, cursor)


def hw_advance_state(
    state: HoltWintersState, values: np.ndarray, params: HoltWintersParams
) -> HoltWintersState:
    """Fold a block of measurements into the state (fast path for long rolls)."""
    values = np.ascontiguousarray(values, dtype=float)
    if values.size == 0:
        return state
    if not np.all(np.isfinite(values)):
        raise ValueError("measurements must be finite")
    start_slot = (state.cursor + 1) % state.season_len
    level, trend, seasonal = hw_advance(
        values,
        state.season_len,
        start_slot,
        params.alpha,
        params.beta,
        params.gamma,
        state.level,
        state.trend,
        state.seasonal,
    )
    return HoltWintersState(float(level), float(trend), seasonal, state.cursor + values.size)


def hw_forecast(state: HoltWintersState, horizon: int) -> np.ndarray:
    """h-step-ahead forecasts from the current state, h = 1..horizon."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    steps = np.arange(1, horizon + 1)
    slots = (state.cursor + steps) % state.season_len
    return state.level + steps * state.trend + state.seasonal[slots]


def hw_one_step_sse(series: LoadSeries, params: HoltWintersParams) -> float:
    """One-step-ahead SSE over the series under fixed gains."""
    init = hw_init(series)
    k = series.grid.intervals_per_day
    return float(
        hw_scan_sse(
            series.values,
            init.season_len,
            k,
            params.alpha,
            params.beta,
            params.gamma,
            init.level,
            init.trend,
            init.seasonal,
        )
    )


def _grid_best(series: LoadSeries, grids: tuple) -> tuple[HoltWintersParams, float]:
    init = hw_init(series)
    k = series.grid.intervals_per_day
    triples = np.array(list(product(*grids)), dtype=float)
    sses = hw_scan_sse_batch(
        series.values,
        init.season_len,
        k,
        np.ascontiguousarray(triples[:, 0]),
        np.ascontiguousarray(triples[:, 1]),
        np.ascontiguousarray(triples[:, 2]),
        init.level,
        init.trend,
        init.seasonal,
    )
    # ties resolve to the first candidate in lexicographic order
    best = int(np.argmin(sses))
    a, b, g = triples[best]
    return HoltWintersParams(float(a), float(b), float(g)), float(sses[best])


def hw_fit(series: LoadSeries, min_days: int = 10) -> HoltWintersParams:
    """Select smoothing gains by coarse grid search plus local refinement.

    The coarse stage scans step 0.1 over the open unit cube; the refinement
    rescans step 0.01 within 0.05 of the coarse optimum in every direction.
    """
    if series.n_days < min_days:
        raise ValueError(f"fit needs at least {min_days} days, got {series.n_days}")
    coarse_axis = np.round(np.arange(0.1, 0.95, 0.1), 10)
    coarse, _ = _grid_best(series, (coarse_axis, coarse_axis, coarse_axis))

    def fine_axis(center: float) -> np.ndarray:
        axis = np.round(center + np.arange(-5, 6) * 0.01, 10)
        return axis[(axis > 0.0) & (axis < 1.0)]

    fine, _ = _grid_best(
        series, (fine_axis(coarse.alpha), fine_axis(coarse.beta), fine_axis(coarse.gamma))
    )
    return fine
