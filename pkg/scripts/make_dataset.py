#!/usr/bin/env python3
"""Materialize the bundled synthetic dataset as CSV for the example configs.

Usage: python scripts/make_dataset.py [--out data/pima_like.csv] [--seed 20211]

Swap the configs' dataset.path to a real diabetes CSV (same 9-column layout)
to run the experiments on actual data.
"""

import argparse
from pathlib import Path

from stackga.dataset import write_csv
from stackga.synth import make_pima_like


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/pima_like.csv")
    ap.add_argument("--seed", type=int, default=20211)
    ap.add_argument("--rows", type=int, default=768)
    args = ap.parse_args()
    ds = make_pima_like(n=args.rows, seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(ds, out, header=True)
    print(f"wrote {out} ({ds.n_samples} rows, {ds.n_features} predictors, "
          f"positive rate {ds.labels.mean():.3f})")


if __name__ == "__main__":
    main()
