"""Compare rk-grasp variants against multi-start on random TSP instances.

    python scripts/dominance.py [--count 20] [--cities 30] [--budget 100000] [--seeds 3]
                                [--out results/dominance]

Writes one CSV per algorithm plus a performance-profile TSV, and prints on
how many instances each variant's mean best cost is at most multi-start's.
"""
import argparse
import statistics
from dataclasses import replace
from pathlib import Path

import numpy as np

from rkgrasp.bench import (ExperimentConfig, emit_csv, emit_profile_tsv, parse_seeds,
                           performance_profile, run_experiment)
from rkgrasp.generators import random_tsp
from rkgrasp.io import write_tsplib

ALGOS = ("rk-grasp-rvnd", "rk-grasp-grid", "rk-grasp-nm", "multi-start")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--cities", type=int, default=30)
    ap.add_argument("--budget", type=int, default=100_000)
    ap.add_argument("--seeds", default="3")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/dominance")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for k in range(args.count):
        inst = replace(random_tsp(args.cities, np.random.default_rng(30_000 + k)),
                       name=f"tsp{args.cities}-{k:02d}")
        path = out / f"{inst.name}.tsp"
        write_tsplib(inst, path)
        files.append(str(path))

    tables = {}
    for algo in ALGOS:
        cfg = ExperimentConfig("tsp", files, algo=algo, seeds=parse_seeds(args.seeds),
                               decode_budget=args.budget, workers=args.workers)
        tables[algo] = run_experiment(cfg)
        emit_csv(tables[algo], out / f"{algo}.csv")
        print(f"ran {algo}", flush=True)

    means = {a: {i: statistics.mean(r.record.best_cost for r in t.rows
                                     if r.record.instance == i) for i in t.instances}
             for a, t in tables.items()}
    base = means["multi-start"]
    for algo in ALGOS[:-1]:
        wins = sum(means[algo][i] <= base[i] for i in base)
        print(f"{algo:15s} mean best <= multi-start on {wins}/{len(base)}")
    emit_profile_tsv(performance_profile(tables), out / "profile.tsv")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
