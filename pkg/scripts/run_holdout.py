#!/usr/bin/env python3
"""Run the holdout benchmark for a config and print the comparison table.

Usage: python scripts/run_holdout.py [--config configs/pima_holdout.json]
                                     [--seed N] [--out out/holdout]
"""

import argparse
import json
from pathlib import Path

from stackga.config import config_from_dict, config_hash, config_to_dict, load_config
from stackga.pipeline import run_holdout_detailed
from stackga.report import render_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/pima_holdout.json")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default="out/holdout")
    args = ap.parse_args()

    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = config_from_dict({**config_to_dict(cfg), "master_seed": args.seed})
    print(f"master_seed={cfg.master_seed} config_hash={config_hash(cfg)}")

    report, details = run_holdout_detailed(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(render_report(report, "json"))
    (out / "report.md").write_text(render_report(report, "markdown"))

    fmt = lambda v: " n/a " if v is None else f"{v:.3f}"
    print(f"\n{'model':26s} {'acc':>6s} {'sens':>6s} {'spec':>6s} {'auc':>6s}  time")
    for row in report.rows:
        took = report.timings.get(row.name, 0.0)
        print(f"{row.name:26s} {fmt(row.accuracy):>6s} {fmt(row.sensitivity):>6s} "
              f"{fmt(row.specificity):>6s} {fmt(row.auc):>6s}  {took:5.1f}s")
    if report.ga:
        print(f"\nGA mask ({len(report.ga.feature_names)} features): "
              f"{', '.join(report.ga.feature_names)} "
              f"| wrapper CV accuracy {report.ga.best_fitness:.4f}")
    print(f"\nreports in {out}/")


if __name__ == "__main__":
    main()
