"""Pattern regression on day type, lagged loads and behavioral features.

The day-ahead variant regresses each interval on the day-type flag, the load
at the same slot one day and one week earlier, and the behavioral feature
vector of those two lagged slots. One coefficient vector is fitted jointly
over all intervals; the slot enters only through the regressors.

The intra-day variant replaces the fixed {1, 7} day lags with lags 1..N and
adds two observable boundary blocks: the feature vector at the most recent
update boundary of the forecast day (the freshest measurements available) and
the previous day's feature vector at the slot just before the next boundary
(a stand-in for what the features will look like when the block ends).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .features import BEHAVIOR_FEATURES, FeatureConfig, FeatureMatrix, features_at_boundary
from .grid import LoadSeries, update_boundaries
from .linear import LinearModel, fit_ols

SPR_DAY_LAGS = (1, 7)


@dataclass(frozen=True)
class SprConfig:
    history_days: int = 7
    features: FeatureConfig = field(default_factory=FeatureConfig)

    def __post_init__(self) -> None:
        if self.history_days < 1:
            raise ValueError("history_days must be at least 1")


def spr_schema() -> tuple[str, ...]:
    cols = ["day_type"]
    cols += [f"load_d{m}" for m in SPR_DAY_LAGS]
    for m in SPR_DAY_LAGS:
        cols += [f"{name}_d{m}" for name in BEHAVIOR_FEATURES]
    return tuple(cols)


def sprh_schema(config: SprConfig) -> tuple[str, ...]:
    n = config.history_days
    cols = ["day_type"]
    cols += [f"load_d{m}" for m in range(1, n + 1)]
    for m in range(1, n + 1):
        cols += [f"{name}_d{m}" for name in BEHAVIOR_FEATURES]
    cols += [f"{name}_prev_update" for name in BEHAVIOR_FEATURES]
    cols += [f"{name}_next_update" for name in BEHAVIOR_FEATURES]
    return tuple(cols)


def spr_first_day() -> int:
    """First day whose design row avoids the zero-padded feature warmup."""
    return SPR_DAY_LAGS[-1] + 1


def sprh_first_day(config: SprConfig) -> int:
    return config.history_days + 1


def spr_row(series: LoadSeries, fm: FeatureMatrix, day: int, t: int) -> np.ndarray:
    """Design row for interval t of a single day."""
    k = series.grid.intervals_per_day
    if day < spr_first_day():
        raise ValueError(f"day {day} lacks history for the day-ahead pattern regression")
    g = day * k + t
    row = [float(series.day_type(day))]
    row += [series.values[g - m * k] for m in SPR_DAY_LAGS]
    for m in SPR_DAY_LAGS:
        row.extend(fm.behavior_row(g - m * k))
    return np.array(row)


def sprh_row(
    series: LoadSeries, fm: FeatureMatrix, config: SprConfig, day: int, t: int
) -> np.ndarray:
    """Design row for interval t of a day in the intra-day variant."""
    k = series.grid.intervals_per_day
    if day < sprh_first_day(config):
        raise ValueError(f"day {day} lacks history for the intra-day pattern regression")
    g = day * k + t
    n = config.history_days
    row = [float(series.day_type(day))]
    row += [series.values[g - m * k] for m in range(1, n + 1)]
    for m in range(1, n + 1):
        row.extend(fm.behavior_row(g - m * k))
    prev_b, next_b = update_boundaries(series.grid, t)
    row.extend(features_at_boundary(fm, day, prev_b))
    row.extend(features_at_boundary(fm, day - 1, next_b))
    return np.array(row)


def _behavior_matrix(fm: FeatureMatrix) -> np.ndarray:
    cols = [fm.columns.index(c) for c in BEHAVIOR_FEATURES]
    return fm.data[:, cols]


def _behavior_matrix_todate(fm: FeatureMatrix) -> np.ndarray:
    names = (
        "rolling_sum",
        "hourly_total_todate",
        "rel_consumption_todate",
        "hourly_diff_todate",
        "low_flag_todate",
        "high_flag_todate",
    )
    cols = [fm.columns.index(c) for c in names]
    return fm.data[:, cols]


def build_design_spr(
    series: LoadSeries, fm: FeatureMatrix
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized day-ahead design over all rows with full history."""
    k = series.grid.intervals_per_day
    d0 = spr_first_day()
    if series.n_days < d0 + 1:
        raise ValueError(f"need at least {d0 + 1} days, got {series.n_days}")
    g = np.arange(d0 * k, series.values.size)
    behavior = _behavior_matrix(fm)
    cols = [fm.column("day_type")[g]]
    cols += [series.values[g - m * k] for m in SPR_DAY_LAGS]
    for m in SPR_DAY_LAGS:
        cols.append(behavior[g - m * k])
    design = np.column_stack([c if c.ndim == 2 else c[:, None] for c in cols])
    return design, series.values[g].copy(), g // k


def build_design_sprh(
    series: LoadSeries, fm: FeatureMatrix, config: SprConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized intra-day design over all rows with full history."""
    k = series.grid.intervals_per_day
    kh = series.grid.intervals_per_update
    d0 = sprh_first_day(config)
    if series.n_days < d0 + 1:
        raise ValueError(f"need at least {d0 + 1} days, got {series.n_days}")
    g = np.arange(d0 * k, series.values.size)
    t = g % k
    behavior = _behavior_matrix(fm)
    live = _behavior_matrix_todate(fm)

    cols = [fm.column("day_type")[g]]
    n = config.history_days
    cols += [series.values[g - m * k] for m in range(1, n + 1)]
    for m in range(1, n + 1):
        cols.append(behavior[g - m * k])
    prev_b = (t // kh) * kh
    next_b = np.minimum(prev_b + kh, k)
    cols.append(live[g - t + prev_b - 1])
    cols.append(live[g - t - k + next_b - 1])
    design = np.column_stack([c if c.ndim == 2 else c[:, None] for c in cols])
    return design, series.values[g].copy(), g // k


def spr_fit(
    design: np.ndarray,
    target: np.ndarray,
    row_day: np.ndarray,
    schema: tuple[str, ...],
    up_to_day: int | None = None,
) -> LinearModel:
    """Fit the pattern regression on all rows strictly before up_to_day."""
    if up_to_day is not None:
        keep = row_day < up_to_day
        if not keep.any():
            raise ValueError(f"no trainable rows before day {up_to_day}")
        design, target = design[keep], target[keep]
    return fit_ols(design, target, schema)


def spr_predict(model: LinearModel, rows: np.ndarray) -> np.ndarray | float:
    return model.predict(rows)
