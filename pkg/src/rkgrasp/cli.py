"""Command line entry point: ``solve``, ``bench`` and ``profile``."""
from __future__ import annotations

import argparse
import logging
import sys

from rkgrasp.bench import (ExperimentConfig, emit_csv, emit_profile_tsv, load_config,
                           parse_seeds, performance_profile, read_csv, run_experiment,
                           with_overrides)
from rkgrasp.decoders import PROBLEMS, make_decoder
from rkgrasp.driver import ALGORITHMS, SolverParams, solve
from rkgrasp.io import read_instance


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=PROBLEMS)
    p.add_argument("--algo", choices=sorted(ALGORITHMS))
    p.add_argument("--time-limit", type=float, help="seconds per run (default: instance size)")
    p.add_argument("--decode-budget", type=int, help="stop after this many decodes")
    p.add_argument("--hs", type=float, help="initial grid step")
    p.add_argument("--he", type=float, help="final grid step")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rkgrasp", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="solve one instance and print the best solution")
    _common(s)
    s.add_argument("instance")
    s.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("bench", help="run an experiment and write a results CSV")
    _common(b)
    b.add_argument("instances", nargs="*")
    b.add_argument("--config", help="key = value experiment file")
    b.add_argument("--seeds", help="count (5 -> 0..4) or comma list")
    b.add_argument("--workers", type=int)
    b.add_argument("--out", required=True, help="CSV path")

    p = sub.add_parser("profile", help="performance profile from result CSVs")
    p.add_argument("csvs", nargs="+", help="one results CSV per algorithm")
    p.add_argument("--accuracy", type=float, default=1.0, help="percent")
    p.add_argument("--out", required=True, help="TSV path")
    return ap


def _solve(args) -> int:
    if args.problem is None:
        raise SystemExit("solve: --problem is required")
    inst = read_instance(args.problem, args.instance)
    dec = make_decoder(inst)
    limit = args.time_limit
    if limit is None and args.decode_budget is None:
        limit = float(inst.size)
    params = SolverParams(h_s=SolverParams.h_s if args.hs is None else args.hs,
                          h_e=SolverParams.h_e if args.he is None else args.he,
                          time_limit=limit, seed=args.seed, max_decode_calls=args.decode_budget)
    rec = solve(dec, args.algo or "rk-grasp-rvnd", params, instance=inst.name)
    sol = dec.decode(rec.best_keys)
    print(f"instance   {inst.name}")
    print(f"algorithm  {rec.algo}")
    print(f"best cost  {rec.best_cost:g}")
    print(f"time best  {rec.time_to_best:.3f}")
    print(f"decodes    {rec.decode_calls}")
    print(f"solution   {sol.artifact}")
    return 0


def _bench(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        if args.instances:
            cfg = with_overrides(cfg, instances=args.instances)
    else:
        if args.problem is None or not args.instances:
            raise SystemExit("bench: give --config or --problem with instance files")
        cfg = ExperimentConfig(args.problem, list(args.instances))
    cfg = with_overrides(cfg, problem=args.problem, algo=args.algo,
                         seeds=parse_seeds(args.seeds) if args.seeds else None,
                         time_limit=args.time_limit, decode_budget=args.decode_budget,
                         h_s=args.hs, h_e=args.he, workers=args.workers)
    table = run_experiment(cfg)
    emit_csv(table, args.out)
    for s in table.summaries():
        gap = "" if s.gap is None else f"  gap {s.gap:.2f}%  arpd {s.arpd:.2f}%"
        print(f"{s.instance:20s} best {s.best:g}  avrg {s.avrg:g}  time {s.time:.2f}{gap}")
    failed = sum(r.failed for r in table.rows)
    if failed:
        print(f"{failed} run(s) failed", file=sys.stderr)
    return 1 if failed else 0


def _profile(args) -> int:
    tables = {}
    for path in args.csvs:
        t = read_csv(path)
        for algo in t.algos:
            if algo in tables:
                raise SystemExit(f"profile: algorithm {algo} appears in more than one CSV")
            tables[algo] = type(t)([r for r in t.rows if r.record.algo == algo])
    prof = performance_profile(tables, accuracy=args.accuracy)
    emit_profile_tsv(prof, args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return {"solve": _solve, "bench": _bench, "profile": _profile}[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
