"""CSV ingestion and result serialization.

Measurement files carry one header row and one row per interval:
``timestamp,load_kw`` for loads, ``timestamp,solar_wm2`` for irradiance.
Timestamps are ISO-8601 and must be grid aligned and strictly increasing.
Short interior gaps (up to ``max_gap_intervals``) are filled by linear
interpolation between the neighboring measurements; any day still missing
intervals after that is dropped and reported on the ``loadcast.ingest``
logger. Partial days at the start and end of the file are trimmed, so the
returned series always holds whole days with truthful calendar dates.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import logging
from dataclasses import dataclass

import numpy as np

from .engine import ForecastRecord, MetricsReport
from .errors import DataError
from .grid import GridSpec, LoadSeries

log = logging.getLogger("loadcast.ingest")

LOAD_HEADER = ("timestamp", "load_kw")
SOLAR_HEADER = ("timestamp", "solar_wm2")
RECORD_HEADER = ("model", "origin", "target_ts", "forecast_kw", "actual_kw")

DEFAULT_MAX_GAP = 4


@dataclass(frozen=True)
class IngestResult:
    series: LoadSeries
    filled_intervals: int
    dropped_days: tuple[dt.date, ...]


def _parse_rows(path: str, header: tuple[str, str], grid: GridSpec):
    rows: list[tuple[dt.datetime, float]] = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if tuple(s.strip() for s in first) != header:
            raise DataError(f"{path}: expected header {','.join(header)}")
        prev: dt.datetime | None = None
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                ts = dt.datetime.fromisoformat(row[0].strip())
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad timestamp {row[0]!r}") from None
            if ts.tzinfo is not None:
                raise DataError(f"{path}:{lineno}: timestamps must be naive local time")
            if (
                ts.second
                or ts.microsecond
                or (ts.hour * 60 + ts.minute) % grid.interval_minutes
            ):
                raise DataError(f"{path}:{lineno}: timestamp not on the {grid.interval_minutes}-minute grid")
            if prev is not None and ts <= prev:
                raise DataError(f"{path}:{lineno}: timestamps must be strictly increasing")
            try:
                value = float(row[1])
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad value {row[1]!r}") from None
            if not np.isfinite(value):
                raise DataError(f"{path}:{lineno}: value must be finite")
            if value < 0:
                raise DataError(f"{path}:{lineno}: value must be non-negative")
            rows.append((ts, value))
            prev = ts
    if not rows:
        raise DataError(f"{path}: no data rows")
    return rows


def _ingest(
    path: str, header: tuple[str, str], grid: GridSpec, max_gap: int
) -> IngestResult:
    rows = _parse_rows(path, header, grid)
    k = grid.intervals_per_day
    step = grid.interval_minutes
    first_date = rows[0][0].date()

    def flat_index(ts: dt.datetime) -> int:
        return (ts.date() - first_date).days * k + (ts.hour * 60 + ts.minute) // step

    lo = flat_index(rows[0][0])
    hi = flat_index(rows[-1][0])
    full = np.full(hi - lo + 1, np.nan)
    for ts, value in rows:
        full[flat_index(ts) - lo] = value

    # Bridge short interior gaps; longer ones stay NaN and doom their days.
    filled = 0
    missing = np.flatnonzero(np.isnan(full))
    if missing.size:
        starts = missing[np.flatnonzero(np.diff(missing, prepend=-2) > 1)]
        for start in starts:
            end = start
            while end + 1 < full.size and np.isnan(full[end + 1]):
                end += 1
            length = end - start + 1
            if length <= max_gap:
                a, b = full[start - 1], full[end + 1]
                w = np.arange(1, length + 1) / (length + 1)
                full[start : end + 1] = a + w * (b - a)
                filled += length

    day_values: list[np.ndarray] = []
    day_dates: list[dt.date] = []
    dropped: list[dt.date] = []
    first_day = -(-lo // k)  # first whole day covered by the file
    last_day = (hi + 1) // k
    for d in range(first_day, last_day):
        g0 = d * k - lo
        chunk = full[g0 : g0 + k]
        date = first_date + dt.timedelta(days=d)
        bad = int(np.isnan(chunk).sum())
        if bad:
            dropped.append(date)
            log.warning("%s: dropping %s, %d intervals missing", path, date, bad)
        else:
            day_values.append(chunk)
            day_dates.append(date)
    if not day_values:
        raise DataError(f"{path}: no complete days after gap handling")
    if filled:
        log.info("%s: interpolated %d intervals across short gaps", path, filled)
    series = LoadSeries(np.concatenate(day_values), grid, tuple(day_dates))
    return IngestResult(series, filled, tuple(dropped))


def ingest_load(
    path: str, grid: GridSpec | None = None, max_gap: int = DEFAULT_MAX_GAP
) -> IngestResult:
    return _ingest(path, LOAD_HEADER, grid or GridSpec(), max_gap)


def ingest_solar(
    path: str, grid: GridSpec | None = None, max_gap: int = DEFAULT_MAX_GAP
) -> IngestResult:
    return _ingest(path, SOLAR_HEADER, grid or GridSpec(), max_gap)


def write_series_csv(series: LoadSeries, path: str, column: str = "load_kw") -> None:
    """Write a series to CSV; values use repr so a round trip is bit exact."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("timestamp", column))
        for g in range(series.values.size):
            writer.writerow((series.timestamp_at(g).isoformat(), repr(float(series.values[g]))))


def write_records_csv(records: list[ForecastRecord], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_HEADER)
        for r in records:
            writer.writerow(
                (
                    r.model,
                    r.origin.isoformat(),
                    r.target_ts.isoformat(),
                    repr(float(r.forecast_kw)),
                    repr(float(r.actual_kw)),
                )
            )


def read_records_csv(path: str) -> list[ForecastRecord]:
    records: list[ForecastRecord] = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if tuple(s.strip() for s in first) != RECORD_HEADER:
            raise DataError(f"{path}: expected header {','.join(RECORD_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise DataError(f"{path}:{lineno}: expected 5 fields, got {len(row)}")
            try:
                records.append(
                    ForecastRecord(
                        model=row[0],
                        origin=dt.datetime.fromisoformat(row[1]),
                        target_ts=dt.datetime.fromisoformat(row[2]),
                        forecast_kw=float(row[3]),
                        actual_kw=float(row[4]),
                    )
                )
            except ValueError:
                raise DataError(f"{path}:{lineno}: malformed record") from None
    if not records:
        raise DataError(f"{path}: no records")
    return records


def write_report_json(report: MetricsReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")


def write_report_csv(report: MetricsReport, path: str) -> None:
    """One row per model: RMSE per calendar month plus the full span."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("model", *report.months, "overall"))
        for name in report.models:
            row = [name]
            for label in report.months:
                metric = report.monthly[name].get(label)
                row.append(repr(metric.rmse_kw) if metric else "")
            row.append(repr(report.overall[name].rmse_kw))
            writer.writerow(row)
