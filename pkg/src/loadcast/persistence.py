"""Persistence baselines: averages of recent days or of recent same weekdays."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import LoadSeries

PERSISTENCE_KINDS = ("n_day", "n_same_day")


@dataclass(frozen=True)
class PersistenceConfig:
    kind: str = "n_day"
    history_days: int = 10

    def __post_init__(self) -> None:
        if self.kind not in PERSISTENCE_KINDS:
            raise ValueError(f"unknown persistence kind: {self.kind}")
        if self.history_days < 1:
            raise ValueError("history_days must be at least 1")

    @property
    def required_days(self) -> int:
        """Days of history needed before the first forecastable day."""
        if self.kind == "n_day":
            return self.history_days
        return 7 * self.history_days


def persist_forecast(series: LoadSeries, config: PersistenceConfig, day: int) -> np.ndarray:
    """Per-interval forecast profile for one day.

    ``n_day`` averages the N immediately preceding days interval by interval;
    ``n_same_day`` averages the same weekday of the N preceding weeks.
    """
    if day < config.required_days:
        raise ValueError(
            f"day {day} needs {config.required_days} days of history for {config.kind}"
        )
    if day > series.n_days:
        raise ValueError(f"day index out of range: {day}")
    mat = series.day_matrix()
    n = config.history_days
    if config.kind == "n_day":
        window = mat[day - n : day]
    else:
        window = mat[[day - 7 * i for i in range(1, n + 1)]]
    return window.mean(axis=0)
