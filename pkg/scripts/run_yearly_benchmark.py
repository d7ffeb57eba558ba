#!/usr/bin/env python3
"""Year-long benchmark on synthetic household data.

Generates a 365-day load/solar pair, runs the full model lineup in hourly
mode with daily retraining, and writes records plus the report to --out.
With --plot (requires matplotlib) it also renders the running average of
per-block RMSE for each model.
"""

import argparse
import json
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from loadcast import SimConfig, SynthConfig, generate, run_simulation
from loadcast.io_csv import write_records_csv, write_report_csv, write_report_json

DEFAULT_MODELS = {
    "n_day": {},
    "n_same_day": {},
    "hw": {},
    "hwh": {},
    "sarima": {},
    "sarimah": {},
    "par": {},
    "parw": {},
    "parh": {},
    "pareh": {},
    "spr": {},
    "sprh": {},
    "spnn": {"epochs": 200},
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--days", type=int, default=365)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--warmup-days", type=int, default=30)
    parser.add_argument("--models", help="JSON object overriding the default lineup")
    parser.add_argument("--mode", default="hourly", choices=("day_ahead", "hourly"))
    parser.add_argument("--out", default="benchmark_out")
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    models = json.loads(args.models) if args.models else dict(DEFAULT_MODELS)
    if args.mode == "day_ahead":
        models.pop("sprh", None)

    load, solar = generate(SynthConfig(days=args.days, seed=args.seed))
    config = SimConfig(models=models, mode=args.mode, warmup_days=args.warmup_days)

    started = time.perf_counter()
    result = run_simulation(load, config, solar=solar)
    elapsed = time.perf_counter() - started

    os.makedirs(args.out, exist_ok=True)
    write_records_csv(result.records, os.path.join(args.out, "records.csv"))
    write_report_json(result.report, os.path.join(args.out, "report.json"))
    write_report_csv(result.report, os.path.join(args.out, "report.csv"))

    print(f"simulated {args.days} days in {elapsed:.1f}s ({args.mode} mode)")
    ranked = sorted(result.report.models, key=lambda m: result.report.overall[m].rmse_kw)
    for name in ranked:
        overall = result.report.overall[name]
        print(
            f"  {name:<10} rmse {overall.rmse_kw:.4f} kW"
            f"  relative {overall.relative_rmse:.4f}"
        )

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(9, 5))
        for name in ranked:
            trace = result.report.running_avg[name]
            ax.plot(range(1, len(trace) + 1), trace, label=name, linewidth=1.0)
        ax.set_xlabel("forecast block")
        ax.set_ylabel("running average RMSE (kW)")
        ax.legend(ncol=2, fontsize=8)
        fig.tight_layout()
        fig.savefig(os.path.join(args.out, "running_rmse.png"), dpi=150)
        print(f"  plot: {os.path.join(args.out, 'running_rmse.png')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
