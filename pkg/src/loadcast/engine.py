"""Rolling evaluation: daily retraining, block forecasts, error reporting.

The protocol walks the series one day at a time. At each midnight every model
is retrained on all data strictly before that day, then queried either once
for the whole day (day_ahead mode) or once per update period (hourly mode).
Models with intra-day updates see the measurements of the current day up to
the block start; everything else sees only completed days. A leading warmup
span is forecast but excluded from the error metrics so every model is
evaluated on the same targets.
"""

from __future__ import annotations

import datetime as dt
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .grid import LoadSeries
from .registry import RunContext, build_forecaster

MODES = ("day_ahead", "hourly")


@dataclass(frozen=True, slots=True)
class ForecastRecord:
    """One forecast interval: issued at origin, targeting target_ts."""

    model: str
    origin: dt.datetime
    target_ts: dt.datetime
    forecast_kw: float
    actual_kw: float


@dataclass(frozen=True)
class SimConfig:
    models: dict = field(default_factory=lambda: {"n_day": {}})
    mode: str = "day_ahead"
    warmup_days: int = 30
    seed: int = 0
    eval_start: dt.date | None = None
    eval_end: dt.date | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.models:
            raise ConfigError("at least one model is required")
        if self.warmup_days < 1:
            raise ConfigError("warmup_days must be at least 1")


def rmse(errors: np.ndarray) -> float:
    errors = np.asarray(errors, dtype=float)
    if errors.size == 0:
        raise ValueError("cannot take the error of nothing")
    return float(np.sqrt(np.mean(np.square(errors))))


def running_avg_rmse(block_rmse: np.ndarray) -> np.ndarray:
    """Cumulative mean of per-block errors, in block order."""
    block_rmse = np.asarray(block_rmse, dtype=float)
    return np.cumsum(block_rmse) / np.arange(1, block_rmse.size + 1)


@dataclass(frozen=True)
class ModelMetrics:
    rmse_kw: float
    relative_rmse: float
    n_intervals: int


@dataclass(frozen=True)
class MetricsReport:
    """Per-model accuracy over the evaluation span, overall and by month."""

    mode: str
    models: tuple[str, ...]
    months: tuple[str, ...]
    overall: dict[str, ModelMetrics]
    monthly: dict[str, dict[str, ModelMetrics]]
    running_avg: dict[str, tuple[float, ...]]

    def to_dict(self) -> dict:
        def pack(m: ModelMetrics) -> dict:
            return {
                "rmse_kw": m.rmse_kw,
                "relative_rmse": m.relative_rmse,
                "n_intervals": m.n_intervals,
            }

        return {
            "mode": self.mode,
            "months": list(self.months),
            "models": {
                name: {
                    "overall": pack(self.overall[name]),
                    "monthly": {
                        label: pack(self.monthly[name][label]) for label in self.months
                    },
                    "running_avg_rmse": list(self.running_avg[name]),
                }
                for name in self.models
            },
        }


@dataclass(frozen=True)
class SimulationResult:
    config: SimConfig
    records: list[ForecastRecord]
    report: MetricsReport


def _month_label(ts: dt.datetime) -> str:
    return f"{ts.year:04d}-{ts.month:02d}"


def _metrics(forecast: np.ndarray, actual: np.ndarray) -> ModelMetrics:
    err = rmse(forecast - actual)
    mean_actual = float(np.mean(actual))
    rel = err / mean_actual if abs(mean_actual) > 0 else math.inf
    return ModelMetrics(err, rel, int(actual.size))


def build_report(mode: str, model_names: tuple[str, ...], records: list[ForecastRecord]) -> MetricsReport:
    by_model: dict[str, list[ForecastRecord]] = {name: [] for name in model_names}
    for rec in records:
        by_model[rec.model].append(rec)

    months: list[str] = []
    for rec in records:
        label = _month_label(rec.target_ts)
        if label not in months:
            months.append(label)
    months.sort()

    overall: dict[str, ModelMetrics] = {}
    monthly: dict[str, dict[str, ModelMetrics]] = {}
    running: dict[str, tuple[float, ...]] = {}
    for name in model_names:
        recs = by_model[name]
        if not recs:
            raise ValueError(f"no evaluated records for {name}")
        forecast = np.array([r.forecast_kw for r in recs])
        actual = np.array([r.actual_kw for r in recs])
        overall[name] = _metrics(forecast, actual)

        labels = np.array([_month_label(r.target_ts) for r in recs])
        monthly[name] = {
            label: _metrics(forecast[labels == label], actual[labels == label])
            for label in months
            if (labels == label).any()
        }

        block_errs = []
        seen: dict[dt.datetime, list[int]] = {}
        for i, r in enumerate(recs):
            seen.setdefault(r.origin, []).append(i)
        for origin in sorted(seen):
            idx = seen[origin]
            block_errs.append(rmse(forecast[idx] - actual[idx]))
        running[name] = tuple(running_avg_rmse(np.array(block_errs)))

    return MetricsReport(mode, model_names, tuple(months), overall, monthly, running)


def resolve_threads(env: str | None = None) -> int:
    """Worker count from LOADCAST_THREADS: unset means 1, 0 means all cores."""
    raw = os.environ.get("LOADCAST_THREADS") if env is None else env
    if raw is None or raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"LOADCAST_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ConfigError("LOADCAST_THREADS must be non-negative")
    if n == 0:
        return os.cpu_count() or 1
    return n


def _eval_days(series: LoadSeries, config: SimConfig) -> list[int]:
    days = list(range(config.warmup_days, series.n_days))
    if config.eval_start is not None:
        days = [d for d in days if series.day_dates[d] >= config.eval_start]
    if config.eval_end is not None:
        days = [d for d in days if series.day_dates[d] <= config.eval_end]
    return days


def run_simulation(
    series: LoadSeries,
    config: SimConfig,
    solar: LoadSeries | None = None,
) -> SimulationResult:
    """Run the full rolling retrain/forecast protocol for every model."""
    if solar is not None:
        if solar.grid != series.grid:
            raise DataError("solar series is on a different measurement grid")
        if solar.n_days != series.n_days or solar.day_dates != series.day_dates:
            raise DataError("solar series does not cover the same days as the load")

    ctx = RunContext(series, solar, seed=config.seed)
    forecasters = {}
    for name, params in config.models.items():
        if not isinstance(params, dict):
            raise ConfigError(f"parameters for {name} must be a mapping")
        forecasters[name] = build_forecaster(name, params, ctx)

    for name, fc in forecasters.items():
        if fc.requires_hourly and config.mode != "hourly":
            raise ConfigError(f"{name} updates within the day; run it in hourly mode")
        if fc.min_days() > config.warmup_days:
            raise ConfigError(
                f"{name} needs {fc.min_days()} warmup days, configured {config.warmup_days}"
            )

    days = _eval_days(series, config)
    if not days:
        raise DataError(
            f"no evaluation days: {series.n_days} days of data, warmup {config.warmup_days}"
        )

    grid = series.grid
    k = grid.intervals_per_day
    kh = grid.intervals_per_update
    if config.mode == "day_ahead":
        blocks = [(0, k)]
    else:
        blocks = [(b * kh, kh) for b in range(grid.updates_per_day)]

    def run_model(name: str) -> list[ForecastRecord]:
        fc = forecasters[name]
        out: list[ForecastRecord] = []
        for day in days:
            fc.refit(day)
            for start, length in blocks:
                origin = series.timestamp_at(day * k + start)
                if config.mode == "day_ahead":
                    forecast = np.asarray(fc.forecast_day(day), dtype=float)
                else:
                    forecast = np.asarray(fc.forecast_block(day, start), dtype=float)
                if forecast.shape != (length,):
                    raise ValueError(
                        f"{name} returned {forecast.shape} for a {length}-interval block"
                    )
                actual = series.values[day * k + start : day * k + start + length]
                for i in range(length):
                    out.append(
                        ForecastRecord(
                            model=name,
                            origin=origin,
                            target_ts=series.timestamp_at(day * k + start + i),
                            forecast_kw=float(forecast[i]),
                            actual_kw=float(actual[i]),
                        )
                    )
        return out

    names = tuple(forecasters)
    n_workers = min(resolve_threads(), len(names))
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            per_model = list(pool.map(run_model, names))
    else:
        per_model = [run_model(name) for name in names]

    records: list[ForecastRecord] = []
    for chunk in per_model:
        records.extend(chunk)
    report = build_report(config.mode, names, records)
    return SimulationResult(config, records, report)
