#!/usr/bin/env python3
"""Strategy ablations: local vs global vs random vs nodensity.

Runs the four selection strategies on shared DPC centers per dataset
and prints accuracy, extension-phase runtime, set count, and fallback
usage. The nodensity comparison re-runs with the count-matched parity
cap so both variants identify the same number of extended-centers.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ecac.cli import cmd_ablate
from ecac.config import RunConfig
from ecac.data import load_csv
from ecac.density import pairwise_distance_percentile

ROOT = Path(__file__).resolve().parent.parent
DATASETS = {"pathbased": 3, "spiral": 3, "jain": 2}
DPC_CUTOFF_PERCENTILE = 0.1


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(ROOT / "results" / "ablation"))
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    for name, k in DATASETS.items():
        data_path = ROOT / "data" / f"{name}.csv"
        dataset, _ = load_csv(data_path, label_column=-1)
        flags = {
            "data": str(data_path), "label_col": -1, "algo": "dpc", "k": k,
            "seed": args.seed,
            "d_c": pairwise_distance_percentile(dataset, DPC_CUTOFF_PERCENTILE),
            "out": str(Path(args.out) / name),
        }
        print(f"== {name} (k={k}) ==")
        cmd_ablate(RunConfig.from_sources(None, dict(flags)), ["local", "global", "random"])
        print("-- parity-capped density comparison --")
        cmd_ablate(RunConfig.from_sources(None, dict(flags)), ["local", "nodensity"])
        print()


if __name__ == "__main__":
    main()
