"""Uniform forecaster interface over all model families, keyed by name.

Every forecaster is retrained once per evaluation day on all data strictly
before that day and then queried for whole-day or update-period blocks.
Models without an intra-day adaptation ignore same-day measurements: their
block forecasts are slices of the forecast they made at midnight. Fit results
that are shared between variants (plain and intra-day flavors of the same
family train identically) are computed once per day through a shared cache.
"""

from __future__ import annotations

import threading
from typing import Callable

import numpy as np

from .errors import ConfigError, DataError
from .features import FeatureConfig, FeatureMatrix, compute_features
from .grid import LoadSeries
from .holt_winters import hw_advance_state, hw_fit, hw_forecast, hw_init
from .mlp import mlp_predict, mlp_train
from .par import ParConfig, fit_par, par_forecast
from .persistence import PersistenceConfig, persist_forecast
from .sarima import SarimaOrder, sarima_fit, sarima_forecast, sarima_forecast_from
from .spr import (
    SprConfig,
    build_design_spr,
    build_design_sprh,
    spr_fit,
    spr_first_day,
    spr_schema,
    sprh_first_day,
    sprh_schema,
)


class _FitCache:
    """Compute-once store for per-day fit results, safe under thread pools."""

    def __init__(self) -> None:
        self._data: dict = {}
        self._locks: dict = {}
        self._guard = threading.Lock()

    def get(self, key, builder: Callable):
        with self._guard:
            if key in self._data:
                return self._data[key]
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            with self._guard:
                if key in self._data:
                    return self._data[key]
            value = builder()
            with self._guard:
                self._data[key] = value
            return value


class RunContext:
    """Shared per-run state: the data plus caches for features and fits."""

    def __init__(self, series: LoadSeries, solar: LoadSeries | None, seed: int = 0) -> None:
        self.series = series
        self.solar = solar
        self.seed = seed
        self.grid = series.grid
        self.fits = _FitCache()
        self._features: dict[FeatureConfig, FeatureMatrix] = {}
        self._designs: dict = {}

    def features(self, config: FeatureConfig) -> FeatureMatrix:
        if config not in self._features:
            self._features[config] = compute_features(self.series, config)
        return self._features[config]

    def design(self, key, builder: Callable):
        if key not in self._designs:
            self._designs[key] = builder()
        return self._designs[key]


class Forecaster:
    """Base interface; subclasses fill in fitting and forecasting."""

    requires_hourly = False
    intra_day = False

    def __init__(self, name: str, ctx: RunContext) -> None:
        self.name = name
        self.ctx = ctx
        self._day_cache: dict[int, np.ndarray] = {}

    def min_days(self) -> int:
        raise NotImplementedError

    def refit(self, day: int) -> None:
        """Train on all data strictly before the given day."""
        self._day_cache.clear()

    def forecast_day(self, day: int) -> np.ndarray:
        raise NotImplementedError

    def forecast_block(self, day: int, start: int) -> np.ndarray:
        """Forecast one update period; default slices the midnight forecast."""
        profile = self._day_cache.get(day)
        if profile is None:
            profile = self.forecast_day(day)
            self._day_cache[day] = profile
        kh = self.ctx.grid.intervals_per_update
        return profile[start : start + kh]


def _require_empty(params: dict, name: str) -> None:
    if params:
        raise ConfigError(f"unknown parameter for {name}: {sorted(params)[0]}")


def _take(params: dict, key: str, default, caster):
    if key in params:
        value = params.pop(key)
        try:
            return caster(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return default


def _feature_config(params: dict) -> FeatureConfig:
    block = params.pop("features", {})
    if not isinstance(block, dict):
        raise ConfigError("features must be a mapping")
    block = dict(block)
    cfg = FeatureConfig(
        rolling_sum_window=_take(block, "rolling_sum_window", 8, int),
        low_flag_ratio=_take(block, "low_flag_ratio", 0.2, float),
        high_flag_ratio=_take(block, "high_flag_ratio", 1.5, float),
        epsilon_div=_take(block, "epsilon_div", 1e-9, float),
    )
    _require_empty(block, "features")
    return cfg


class PersistenceForecaster(Forecaster):
    def __init__(self, name: str, ctx: RunContext, config: PersistenceConfig) -> None:
        super().__init__(name, ctx)
        self.config = config

    def min_days(self) -> int:
        return self.config.required_days

    def forecast_day(self, day: int) -> np.ndarray:
        return persist_forecast(self.ctx.series, self.config, day)


class HoltWintersForecaster(Forecaster):
    def __init__(self, name: str, ctx: RunContext, hourly: bool) -> None:
        super().__init__(name, ctx)
        self.hourly = hourly
        self.intra_day = hourly
        self._params = None
        self._midnight_state = None

    def min_days(self) -> int:
        return 10

    def refit(self, day: int) -> None:
        super().refit(day)
        series = self.ctx.series
        k = self.ctx.grid.intervals_per_day
        self._params = self.ctx.fits.get(("hw", day), lambda: hw_fit(series.prefix(day)))
        init = hw_init(series.prefix(day))
        self._midnight_state = hw_advance_state(
            init, series.values[k : day * k], self._params
        )
        self._day = day

    def forecast_day(self, day: int) -> np.ndarray:
        return hw_forecast(self._midnight_state, self.ctx.grid.intervals_per_day)

    def forecast_block(self, day: int, start: int) -> np.ndarray:
        if not self.hourly:
            return super().forecast_block(day, start)
        k = self.ctx.grid.intervals_per_day
        state = hw_advance_state(
            self._midnight_state,
            self.ctx.series.values[day * k : day * k + start],
            self._params,
        )
        return hw_forecast(state, self.ctx.grid.intervals_per_update)


class SarimaForecaster(Forecaster):
    def __init__(self, name: str, ctx: RunContext, order: SarimaOrder, hourly: bool) -> None:
        super().__init__(name, ctx)
        self.order = order
        self.hourly = hourly
        self.intra_day = hourly
        self._model = None

    def min_days(self) -> int:
        return 10

    def refit(self, day: int) -> None:
        super().refit(day)
        series = self.ctx.series
        k = self.ctx.grid.intervals_per_day
        key = ("sarima", self.order, day)
        self._model = self.ctx.fits.get(
            key, lambda: sarima_fit(series.values[: day * k], self.order)
        )

    def forecast_day(self, day: int) -> np.ndarray:
        return sarima_forecast(self._model, self.ctx.grid.intervals_per_day)

    def forecast_block(self, day: int, start: int) -> np.ndarray:
        if not self.hourly:
            return super().forecast_block(day, start)
        k = self.ctx.grid.intervals_per_day
        history = self.ctx.series.values[: day * k + start]
        return sarima_forecast_from(self._model, history, self.ctx.grid.intervals_per_update)


class ParForecaster(Forecaster):
    def __init__(self, name: str, ctx: RunContext, config: ParConfig, hourly: bool) -> None:
        super().__init__(name, ctx)
        self.config = config
        self.hourly = hourly
        self.intra_day = hourly
        self._model = None
        if config.uses_solar and ctx.solar is None:
            raise ConfigError(f"{name} needs a solar series")

    def min_days(self) -> int:
        return self.config.first_day + 1

    def refit(self, day: int) -> None:
        super().refit(day)
        cfg = self.config
        key = (
            "par",
            cfg.ar_order,
            cfg.history_days,
            cfg.uses_solar,
            cfg.same_day_history if cfg.uses_same_day else None,
            day,
        )
        self._model = self.ctx.fits.get(
            key,
            lambda: fit_par(self.ctx.series, cfg, self.ctx.solar, up_to_day=day),
        )

    def forecast_day(self, day: int) -> np.ndarray:
        k = self.ctx.grid.intervals_per_day
        return par_forecast(
            self._model, self.ctx.series, self.config, day * k, k, self.ctx.solar
        )

    def forecast_block(self, day: int, start: int) -> np.ndarray:
        if not self.hourly:
            return super().forecast_block(day, start)
        k = self.ctx.grid.intervals_per_day
        return par_forecast(
            self._model,
            self.ctx.series,
            self.config,
            day * k + start,
            self.ctx.grid.intervals_per_update,
            self.ctx.solar,
        )


class SprForecaster(Forecaster):
    def __init__(self, name: str, ctx: RunContext, features: FeatureConfig) -> None:
        super().__init__(name, ctx)
        self.features = features
        self._model = None

    def min_days(self) -> int:
        return spr_first_day() + 1

    def _design(self):
        fm = self.ctx.features(self.features)
        return self.ctx.design(
            ("spr", self.features), lambda: build_design_spr(self.ctx.series, fm)
        )

    def refit(self, day: int) -> None:
        super().refit(day)
        design, target, row_day = self._design()
        self._model = self.ctx.fits.get(
            ("spr_ols", self.features, day),
            lambda: spr_fit(design, target, row_day, spr_schema(), up_to_day=day),
        )

    def forecast_day(self, day: int) -> np.ndarray:
        design, _, _ = self._design()
        k = self.ctx.grid.intervals_per_day
        lo = (day - spr_first_day()) * k
        return np.asarray(self._model.predict(design[lo : lo + k]))


class SprhForecaster(Forecaster):
    requires_hourly = True
    intra_day = True

    def __init__(self, name: str, ctx: RunContext, config: SprConfig) -> None:
        super().__init__(name, ctx)
        self.config = config
        self._model = None

    def min_days(self) -> int:
        return sprh_first_day(self.config) + 1

    def _design(self):
        fm = self.ctx.features(self.config.features)
        return self.ctx.design(
            ("sprh", self.config.history_days, self.config.features),
            lambda: build_design_sprh(self.ctx.series, fm, self.config),
        )

    def refit(self, day: int) -> None:
        super().refit(day)
        design, target, row_day = self._design()
        self._model = self.ctx.fits.get(
            ("sprh_ols", self.config.history_days, self.config.features, day),
            lambda: spr_fit(
                design, target, row_day, sprh_schema(self.config), up_to_day=day
            ),
        )

    def forecast_block(self, day: int, start: int) -> np.ndarray:
        design, _, _ = self._design()
        k = self.ctx.grid.intervals_per_day
        kh = self.ctx.grid.intervals_per_update
        lo = (day - sprh_first_day(self.config)) * k + start
        return np.asarray(self._model.predict(design[lo : lo + kh]))

    def forecast_day(self, day: int) -> np.ndarray:
        raise ConfigError("sprh updates within the day and cannot run day-ahead")


class SpnnForecaster(Forecaster):
    def __init__(
        self,
        name: str,
        ctx: RunContext,
        features: FeatureConfig,
        epochs: int,
        learning_rate: float,
        seed: int,
    ) -> None:
        super().__init__(name, ctx)
        self.features = features
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed
        self._model = None

    def min_days(self) -> int:
        return spr_first_day() + 1

    def _design(self):
        fm = self.ctx.features(self.features)
        return self.ctx.design(
            ("spr", self.features), lambda: build_design_spr(self.ctx.series, fm)
        )

    def refit(self, day: int) -> None:
        super().refit(day)
        design, target, row_day = self._design()
        keep = row_day < day
        if not keep.any():
            raise DataError(f"no trainable rows before day {day}")
        self._model = self.ctx.fits.get(
            ("spnn", self.features, self.epochs, self.learning_rate, self.seed, day),
            lambda: mlp_train(
                design[keep],
                target[keep],
                epochs=self.epochs,
                learning_rate=self.learning_rate,
                seed=self.seed,
            ),
        )

    def forecast_day(self, day: int) -> np.ndarray:
        design, _, _ = self._design()
        k = self.ctx.grid.intervals_per_day
        lo = (day - spr_first_day()) * k
        return np.asarray(mlp_predict(self._model, design[lo : lo + k]))


def _build_n_day(params: dict, ctx: RunContext) -> Forecaster:
    n = _take(params, "history_days", 10, int)
    _require_empty(params, "n_day")
    return PersistenceForecaster("n_day", ctx, PersistenceConfig("n_day", n))


def _build_n_same_day(params: dict, ctx: RunContext) -> Forecaster:
    n = _take(params, "history_days", 4, int)
    _require_empty(params, "n_same_day")
    return PersistenceForecaster("n_same_day", ctx, PersistenceConfig("n_same_day", n))


def _build_hw(params: dict, ctx: RunContext) -> Forecaster:
    _require_empty(params, "hw")
    return HoltWintersForecaster("hw", ctx, hourly=False)


def _build_hwh(params: dict, ctx: RunContext) -> Forecaster:
    _require_empty(params, "hwh")
    return HoltWintersForecaster("hwh", ctx, hourly=True)


def _sarima_order(params: dict, ctx: RunContext) -> SarimaOrder:
    default = SarimaOrder(season=ctx.grid.intervals_per_day)
    raw = params.pop("order", None)
    if raw is None:
        return default
    raw = list(raw)
    if len(raw) != 7:
        raise ConfigError("order must be [p, r, q, P, R, Q, season]")
    return SarimaOrder(*[int(v) for v in raw])


def _build_sarima_like(name: str, hourly: bool, params: dict, ctx: RunContext) -> Forecaster:
    order = _sarima_order(params, ctx)
    _require_empty(params, name)
    return SarimaForecaster(name, ctx, order, hourly=hourly)


def _par_config(variant: str, params: dict) -> ParConfig:
    return ParConfig(
        variant=variant,
        ar_order=_take(params, "ar_order", 4, int),
        history_days=_take(params, "history_days", 10, int),
        same_day_history=_take(params, "same_day_history", 4, int),
    )


def _build_par_like(variant: str, hourly: bool, params: dict, ctx: RunContext) -> Forecaster:
    config = _par_config(variant, params)
    _require_empty(params, variant)
    return ParForecaster(variant, ctx, config, hourly=hourly)


def _build_spr(params: dict, ctx: RunContext) -> Forecaster:
    features = _feature_config(params)
    _require_empty(params, "spr")
    return SprForecaster("spr", ctx, features)


def _build_sprh(params: dict, ctx: RunContext) -> Forecaster:
    features = _feature_config(params)
    n = _take(params, "history_days", 7, int)
    _require_empty(params, "sprh")
    return SprhForecaster("sprh", ctx, SprConfig(history_days=n, features=features))


def _build_spnn(params: dict, ctx: RunContext) -> Forecaster:
    features = _feature_config(params)
    epochs = _take(params, "epochs", 2000, int)
    lr = _take(params, "learning_rate", 0.01, float)
    seed = _take(params, "seed", ctx.seed, int)
    _require_empty(params, "spnn")
    return SpnnForecaster("spnn", ctx, features, epochs, lr, seed)


REGISTRY: dict[str, Callable[[dict, RunContext], Forecaster]] = {
    "n_day": _build_n_day,
    "n_same_day": _build_n_same_day,
    "hw": _build_hw,
    "hwh": _build_hwh,
    "sarima": lambda p, c: _build_sarima_like("sarima", False, p, c),
    "sarimah": lambda p, c: _build_sarima_like("sarimah", True, p, c),
    "par": lambda p, c: _build_par_like("par", False, p, c),
    "parw": lambda p, c: _build_par_like("parw", False, p, c),
    "parh": lambda p, c: _build_par_like("parh", True, p, c),
    "pareh": lambda p, c: _build_par_like("pareh", True, p, c),
    "spr": _build_spr,
    "sprh": _build_sprh,
    "spnn": _build_spnn,
}


def register_model(name: str, builder: Callable[[dict, RunContext], Forecaster]) -> None:
    """Extension hook, mainly for test doubles."""
    REGISTRY[name] = builder


def build_forecaster(name: str, params: dict, ctx: RunContext) -> Forecaster:
    if name not in REGISTRY:
        raise ConfigError(f"unknown model: {name}")
    return REGISTRY[name](dict(params), ctx)
