#!/usr/bin/env python3
"""Run the k-fold benchmark for every configured k and print the table.

Usage: python scripts/run_xval.py [--config configs/pima_xval.json]
                                  [--seed N] [--out out/xval]
"""

import argparse
from pathlib import Path

from stackga.config import config_from_dict, config_hash, config_to_dict, load_config
from stackga.pipeline import run_kfold
from stackga.report import render_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/pima_xval.json")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default="out/xval")
    args = ap.parse_args()

    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = config_from_dict({**config_to_dict(cfg), "master_seed": args.seed})
    print(f"master_seed={cfg.master_seed} config_hash={config_hash(cfg)}")

    report = run_kfold(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(render_report(report, "json"))
    (out / "report.md").write_text(render_report(report, "markdown"))

    ks = sorted({r.k for r in report.kfold_rows})
    names = []
    for r in report.kfold_rows:
        if r.name not in names:
            names.append(r.name)
    by = {(r.name, r.k): r for r in report.kfold_rows}
    header = "".join(f"  k={k:<5d}" for k in ks)
    print(f"\n{'model':26s}{header}")
    for name in names:
        cells = "".join(
            f"  {by[(name, k)].mean_accuracy:.3f}  " if by[(name, k)].mean_accuracy is not None
            else "    n/a  "
            for k in ks
        )
        print(f"{name:26s}{cells}")
    print(f"\nreports in {out}/")


if __name__ == "__main__":
    main()
