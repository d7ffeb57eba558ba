"""Autoregression on recent intervals anchored by persistence profiles.

Each interval is regressed on its n immediately preceding intervals (crossing
day boundaries on the flat timeline) plus a persistence estimate for the
target slot, optionally a solar forecast column and a same-weekday
persistence column. Training uses measured lag values everywhere; forecasting
substitutes already-emitted forecasts for lag slots at or after the forecast
origin, so a block can be re-anchored at any update boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import LoadSeries
from .linear import LinearModel, fit_ols
from .persistence import PersistenceConfig, persist_forecast

PAR_VARIANTS = ("par", "parw", "parh", "pareh")


@dataclass(frozen=True)
class ParConfig:
    variant: str = "par"
    ar_order: int = 4
    history_days: int = 10
    same_day_history: int = 4

    def __post_init__(self) -> None:
        if self.variant not in PAR_VARIANTS:
            raise ValueError(f"unknown variant: {self.variant}")
        if self.ar_order < 1:
            raise ValueError("ar_order must be at least 1")
        if self.history_days < 1:
            raise ValueError("history_days must be at least 1")
        if self.same_day_history < 1:
            raise ValueError("same_day_history must be at least 1")

    @property
    def uses_solar(self) -> bool:
        return self.variant == "parw"

    @property
    def uses_same_day(self) -> bool:
        return self.variant == "pareh"

    @property
    def first_day(self) -> int:
        """First day index with every design input available."""
        if self.uses_same_day:
            return max(self.history_days, 7 * self.same_day_history)
        return self.history_days

    def schema(self) -> tuple[str, ...]:
        cols = [f"lag_{i}" for i in range(1, self.ar_order + 1)]
        cols.append("nday_persistence")
        if self.uses_solar:
            cols.append("solar")
        if self.uses_same_day:
            cols.append("sameday_persistence")
        return tuple(cols)


def _nday_profile_matrix(series: LoadSeries, n: int) -> np.ndarray:
    """Rows d >= n hold the mean of the n preceding days; earlier rows are NaN."""
    mat = series.day_matrix()
    days = mat.shape[0]
    out = np.full_like(mat, np.nan)
    # padded cumulative sum: csum[i] is the sum of all rows before i
    csum = np.vstack([np.zeros((1, mat.shape[1])), np.cumsum(mat, axis=0)])
    out[n:] = (csum[n:days] - csum[: days - n]) / n
    return out


def _same_day_profile_matrix(series: LoadSeries, n: int) -> np.ndarray:
    mat = series.day_matrix()
    out = np.full_like(mat, np.nan)
    first = 7 * n
    for d in range(first, mat.shape[0]):
        out[d] = mat[[d - 7 * i for i in range(1, n + 1)]].mean(axis=0)
    return out


def build_design_par(
    series: LoadSeries, config: ParConfig, solar: LoadSeries | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Teacher-forced design over every trainable interval.

    Returns (design, target, row_day) where row_day[i] is the day index of
    row i, so callers can restrict fitting to days before a cutoff.
    """
    k = series.grid.intervals_per_day
    d0 = config.first_day
    if series.n_days < d0 + 1:
        raise ValueError(
            f"{config.variant} needs at least {d0 + 1} days, got {series.n_days}"
        )
    if config.uses_solar:
        if solar is None:
            raise ValueError("parw needs a solar series")
        if solar.n_days != series.n_days or solar.grid != series.grid:
            raise ValueError("solar series must be grid aligned with the load series")

    y = series.values
    g0 = d0 * k
    n = y.size
    cols = [y[g0 - lag : n - lag] for lag in range(1, config.ar_order + 1)]
    cols.append(_nday_profile_matrix(series, config.history_days).ravel()[g0:])
    if config.uses_solar:
        cols.append(solar.values[g0:])
    if config.uses_same_day:
        cols.append(_same_day_profile_matrix(series, config.same_day_history).ravel()[g0:])
    design = np.column_stack(cols)
    target = y[g0:]
    row_day = np.arange(g0, n) // k
    return design, target, row_day


def fit_par(
    series: LoadSeries,
    config: ParConfig,
    solar: LoadSeries | None = None,
    up_to_day: int | None = None,
) -> LinearModel:
    """Least-squares fit over all trainable rows strictly before up_to_day."""
    design, target, row_day = build_design_par(series, config, solar)
    if up_to_day is not None:
        keep = row_day < up_to_day
        if not keep.any():
            raise ValueError(f"no trainable rows before day {up_to_day}")
        design, target = design[keep], target[keep]
    return fit_ols(design, target, config.schema())


def par_forecast(
    model: LinearModel,
    series: LoadSeries,
    config: ParConfig,
    origin: int,
    horizon: int,
    solar: LoadSeries | None = None,
) -> np.ndarray:
    """Recursive multi-step forecast for intervals origin..origin+horizon-1.

    Lag slots before the origin read measured values; slots at or after it
    read the forecasts already emitted in this call. Persistence and solar
    columns are exogenous per-interval inputs. The window must stay within
    the origin's day because later persistence profiles would need the
    in-progress day to be complete.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    k = series.grid.intervals_per_day
    day, t0 = divmod(origin, k)
    if t0 + horizon > k:
        raise ValueError("forecast window crosses the end of the day")
    if day < config.first_day:
        raise ValueError(f"day {day} lacks history for {config.variant}")
    if origin < config.ar_order:
        raise ValueError("origin too early for the lag window")
    if config.uses_solar and solar is None:
        raise ValueError("parw needs a solar series")

    nday = persist_forecast(
        series, PersistenceConfig("n_day", config.history_days), day
    )
    sameday = (
        persist_forecast(series, PersistenceConfig("n_same_day", config.same_day_history), day)
        if config.uses_same_day
        else None
    )

    coef = model.coefficients
    n_lags = config.ar_order
    buffer = list(series.values[origin - n_lags : origin])
    out = np.empty(horizon)
    for j in range(horizon):
        t = t0 + j
        row = [buffer[-lag] for lag in range(1, n_lags + 1)]
        row.append(nday[t])
        if config.uses_solar:
            row.append(solar.values[origin + j])
        if sameday is not None:
            row.append(sameday[t])
        value = float(np.dot(coef, row))
        out[j] = value
        buffer.append(value)
    return out
