"""Command line entry points.

Exit codes: 0 on success, 1 for usage and configuration problems, 2 when the
input data cannot support the requested run.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import os
import re
import sys

import numpy as np

from .engine import SimConfig, build_report, run_simulation
from .errors import ConfigError, DataError
from .features import FeatureConfig, compute_features, write_features_csv
from .grid import GridSpec, LoadSeries
from .io_csv import (
    ingest_load,
    ingest_solar,
    read_records_csv,
    write_records_csv,
    write_report_csv,
    write_report_json,
    write_series_csv,
)
from .registry import RunContext, build_forecaster
from .synth import SynthConfig, generate


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="loadcast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="rolling retrain/forecast evaluation")
    sim.add_argument("--config", required=True, help="JSON run configuration")
    sim.add_argument("--load", required=True, help="load CSV (timestamp,load_kw)")
    sim.add_argument("--solar", help="solar CSV (timestamp,solar_wm2)")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--dump-features", metavar="CSV", help="also write the behavior feature table")

    fc = sub.add_parser("forecast", help="one forecast from a single trained model")
    fc.add_argument("--model", required=True)
    fc.add_argument("--train", required=True, help="training load CSV")
    fc.add_argument("--at", help="forecast origin (ISO timestamp, default: after the data)")
    fc.add_argument("--horizon", default="24h", help="horizon like 24h or 4h")

    syn = sub.add_parser("synth", help="generate a synthetic household dataset")
    syn.add_argument("--days", type=int, default=365)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--start", default="2016-01-01")
    syn.add_argument("--noise-std", type=float, default=0.05)
    syn.add_argument("--shift-prob", type=float, default=0.25)
    syn.add_argument("--weekend-scale", type=float, default=1.25)
    syn.add_argument("--no-solar", action="store_true")
    syn.add_argument("--out", required=True, help="output directory")

    rep = sub.add_parser("report", help="recompute metrics from a records CSV")
    rep.add_argument("--records", required=True)
    rep.add_argument("--out", required=True, help="output directory")
    return parser


def _load_sim_config(path: str) -> SimConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    raw = dict(raw)
    kwargs = {}
    if "models" in raw:
        kwargs["models"] = raw.pop("models")
    if not isinstance(kwargs.get("models"), dict) or not kwargs.get("models"):
        raise ConfigError("config needs a non-empty models object")
    for key in ("mode", "warmup_days", "seed"):
        if key in raw:
            kwargs[key] = raw.pop(key)
    for key in ("eval_start", "eval_end"):
        if key in raw:
            try:
                kwargs[key] = dt.date.fromisoformat(raw.pop(key))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad {key}: {exc}") from exc
    if raw:
        raise ConfigError(f"unknown config key: {sorted(raw)[0]}")
    return SimConfig(**kwargs)


def _cmd_simulate(args) -> int:
    config = _load_sim_config(args.config)
    series = ingest_load(args.load).series
    solar = ingest_solar(args.solar).series if args.solar else None
    result = run_simulation(series, config, solar=solar)

    os.makedirs(args.out, exist_ok=True)
    write_records_csv(result.records, os.path.join(args.out, "records.csv"))
    write_report_json(result.report, os.path.join(args.out, "report.json"))
    write_report_csv(result.report, os.path.join(args.out, "report.csv"))
    if args.dump_features:
        write_features_csv(compute_features(series, FeatureConfig()), series, args.dump_features)

    for name in result.report.models:
        overall = result.report.overall[name]
        print(
            f"{name}: rmse {overall.rmse_kw:.4f} kW"
            f" relative {overall.relative_rmse:.4f}"
            f" n {overall.n_intervals}"
        )
    return 0


def _parse_horizon(text: str, grid: GridSpec) -> int:
    match = re.fullmatch(r"(\d+)h", text.strip())
    if not match:
        raise ConfigError(f"horizon must look like 24h, got {text!r}")
    hours = int(match.group(1))
    if hours < 1:
        raise ConfigError("horizon must be at least 1h")
    return hours * 60 // grid.interval_minutes


def _with_blank_day(series: LoadSeries) -> LoadSeries:
    """Extend by one zero-valued day so next-day design rows can be built."""
    k = series.grid.intervals_per_day
    values = np.concatenate([series.values, np.zeros(k)])
    dates = series.day_dates + (series.day_dates[-1] + dt.timedelta(days=1),)
    return LoadSeries(values, series.grid, dates)


def _cmd_forecast(args) -> int:
    series = ingest_load(args.train).series
    grid = series.grid
    k = grid.intervals_per_day
    kh = grid.intervals_per_update
    horizon = _parse_horizon(args.horizon, grid)

    after_end = dt.datetime.combine(
        series.day_dates[-1] + dt.timedelta(days=1), dt.time()
    )
    if args.at is None:
        at = after_end
    else:
        try:
            at = dt.datetime.fromisoformat(args.at)
        except ValueError as exc:
            raise ConfigError(f"bad --at timestamp: {exc}") from exc

    if at == after_end:
        day, t = series.n_days, 0
        series = _with_blank_day(series)
    else:
        try:
            g = series.index_of(at)
        except ValueError as exc:
            raise DataError(str(exc)) from exc
        day, t = divmod(g, k)

    ctx = RunContext(series, None)
    fc = build_forecaster(args.model, {}, ctx)
    if day < fc.min_days():
        raise DataError(f"{args.model} needs {fc.min_days()} days before {at.isoformat()}")
    if t + horizon > k:
        raise ConfigError("forecast window must stay inside the origin day")

    fc.refit(day)
    if fc.intra_day:
        if t % kh:
            raise ConfigError(f"{args.model} forecasts from update boundaries ({kh} intervals)")
        if horizon > kh:
            raise ConfigError(f"{args.model} re-forecasts every update period; horizon is at most {kh} intervals")
        values = np.asarray(fc.forecast_block(day, t))[:horizon]
    else:
        values = np.asarray(fc.forecast_day(day))[t : t + horizon]

    print("timestamp,forecast_kw")
    for i, value in enumerate(values):
        ts = series.timestamp_at(day * k + t + i)
        print(f"{ts.isoformat()},{float(value)!r}")
    return 0


def _cmd_synth(args) -> int:
    try:
        start = dt.date.fromisoformat(args.start)
    except ValueError as exc:
        raise ConfigError(f"bad --start date: {exc}") from exc
    config = SynthConfig(
        days=args.days,
        seed=args.seed,
        start=start,
        noise_std=args.noise_std,
        shift_prob=args.shift_prob,
        weekend_scale=args.weekend_scale,
        with_solar=not args.no_solar,
    )
    load, solar = generate(config)
    os.makedirs(args.out, exist_ok=True)
    load_path = os.path.join(args.out, "load.csv")
    write_series_csv(load, load_path, "load_kw")
    print(f"wrote {load_path}")
    if solar is not None:
        solar_path = os.path.join(args.out, "solar.csv")
        write_series_csv(solar, solar_path, "solar_wm2")
        print(f"wrote {solar_path}")
    return 0


def _cmd_report(args) -> int:
    records = read_records_csv(args.records)
    names: list[str] = []
    origins_per_day: dict[tuple[str, dt.date], set] = {}
    for rec in records:
        if rec.model not in names:
            names.append(rec.model)
        origins_per_day.setdefault((rec.model, rec.origin.date()), set()).add(rec.origin)
    mode = "hourly" if any(len(v) > 1 for v in origins_per_day.values()) else "day_ahead"
    report = build_report(mode, tuple(names), records)
    os.makedirs(args.out, exist_ok=True)
    write_report_json(report, os.path.join(args.out, "report.json"))
    write_report_csv(report, os.path.join(args.out, "report.csv"))
    for name in report.models:
        overall = report.overall[name]
        print(f"{name}: rmse {overall.rmse_kw:.4f} kW relative {overall.relative_rmse:.4f}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "forecast": _cmd_forecast,
    "synth": _cmd_synth,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"loadcast: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"loadcast: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
