"""Synthetic residential load generator with a causal morning-shift mechanism.

Days follow a smooth base profile with an overnight trough, a morning peak,
a daytime component and an evening peak. Weekends are scaled up. On randomly
chosen days the morning activity block moves a whole hour earlier or later,
and the daytime component scales with the direction of the shift: when the
morning happened early the rest of the day runs lighter, when it happened
late the rest of the day runs heavier. A forecaster that watches the morning
as it unfolds can therefore predict the remainder of such a day better than
any model that only saw previous days. Optionally emits a clear-sky solar
signal that is exactly zero at night.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, LoadSeries

_MORNING_CENTER_H = 7.5
_MORNING_WIDTH_H = 1.2
_MORNING_AMPL = 0.9
_DAYTIME_CENTER_H = 13.0
_DAYTIME_WIDTH_H = 2.8
_DAYTIME_AMPL = 0.45
_EVENING_CENTER_H = 19.5
_EVENING_WIDTH_H = 1.6
_EVENING_AMPL = 1.05
_BASE_LOAD = 0.25
_DAYTIME_SWING = 0.6
_SOLAR_PEAK_WM2 = 820.0
_SOLAR_WIDTH_H = 2.6
_SOLAR_CUTOFF_H = 6.0
_SOLAR_NOISE_WM2 = 8.0


@dataclass(frozen=True)
class SynthConfig:
    days: int = 365
    seed: int = 0
    start: dt.date = dt.date(2016, 1, 1)
    noise_std: float = 0.05
    shift_prob: float = 0.25
    weekday_scale: float = 1.0
    weekend_scale: float = 1.25
    with_solar: bool = True

    def __post_init__(self) -> None:
        if self.days < 1:
            raise ValueError("days must be at least 1")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")
        if not 0.0 <= self.shift_prob <= 1.0:
            raise ValueError("shift_prob must lie in [0, 1]")
        if self.weekday_scale <= 0 or self.weekend_scale <= 0:
            raise ValueError("day-type scales must be positive")


def _bell(hours: np.ndarray, center: float, width: float) -> np.ndarray:
    return np.exp(-0.5 * ((hours - center) / width) ** 2)


def _slot_hours(grid: GridSpec) -> np.ndarray:
    k = grid.intervals_per_day
    return np.arange(k) * grid.interval_minutes / 60.0


def morning_component(grid: GridSpec, shift_hours: float = 0.0) -> np.ndarray:
    hours = _slot_hours(grid)
    return _MORNING_AMPL * _bell(hours, _MORNING_CENTER_H + shift_hours, _MORNING_WIDTH_H)


def base_profile(grid: GridSpec) -> np.ndarray:
    """Deterministic weekday profile in kW, one value per interval."""
    hours = _slot_hours(grid)
    profile = np.full(hours.size, _BASE_LOAD)
    profile += morning_component(grid)
    profile += _DAYTIME_AMPL * _bell(hours, _DAYTIME_CENTER_H, _DAYTIME_WIDTH_H)
    profile += _EVENING_AMPL * _bell(hours, _EVENING_CENTER_H, _EVENING_WIDTH_H)
    return profile


def _day_profile(grid: GridSpec, shift_hours: float) -> np.ndarray:
    """Profile of one day given its realized morning shift."""
    hours = _slot_hours(grid)
    profile = np.full(hours.size, _BASE_LOAD)
    profile += morning_component(grid, shift_hours)
    daytime_factor = 1.0 + _DAYTIME_SWING * shift_hours
    profile += daytime_factor * _DAYTIME_AMPL * _bell(hours, _DAYTIME_CENTER_H, _DAYTIME_WIDTH_H)
    profile += _EVENING_AMPL * _bell(hours, _EVENING_CENTER_H, _EVENING_WIDTH_H)
    return profile


def solar_profile(grid: GridSpec) -> np.ndarray:
    """Clear-sky irradiance proxy in W/m2, exactly zero away from midday."""
    hours = _slot_hours(grid)
    cutoff = np.exp(-0.5 * (_SOLAR_CUTOFF_H / _SOLAR_WIDTH_H) ** 2)
    raw = _bell(hours, 12.5, _SOLAR_WIDTH_H) - cutoff
    return _SOLAR_PEAK_WM2 * np.maximum(raw, 0.0) / (1.0 - cutoff)


def generate(config: SynthConfig, grid: GridSpec | None = None) -> tuple[LoadSeries, LoadSeries | None]:
    """Generate (load, solar) series; solar is None when disabled.

    The draw order is fixed (shift uniforms, shift signs, load noise, solar
    noise) so the same seed always yields the same realization and changing
    one knob does not reshuffle the others.
    """
    grid = grid or GridSpec()
    k = grid.intervals_per_day
    rng = np.random.default_rng(config.seed)
    shift_u = rng.random(config.days)
    sign_u = rng.random(config.days)
    load_noise = rng.normal(0.0, 1.0, size=(config.days, k))
    solar_noise = rng.normal(0.0, 1.0, size=(config.days, k))

    days = np.empty((config.days, k))
    for d in range(config.days):
        shift = 0.0
        if shift_u[d] < config.shift_prob:
            shift = -1.0 if sign_u[d] < 0.5 else 1.0
        date = config.start + dt.timedelta(days=d)
        scale = config.weekend_scale if date.weekday() >= 5 else config.weekday_scale
        days[d] = scale * _day_profile(grid, shift)
    days = np.maximum(days + config.noise_std * load_noise, 0.0)
    load = LoadSeries.from_days(days, grid, config.start)

    solar = None
    if config.with_solar:
        clear = solar_profile(grid)
        lit = clear > 0.0
        solar_days = np.tile(clear, (config.days, 1))
        solar_days[:, lit] = np.maximum(
            solar_days[:, lit] + _SOLAR_NOISE_WM2 * solar_noise[:, lit], 0.0
        )
        solar = LoadSeries.from_days(solar_days, grid, config.start)
    return load, solar
