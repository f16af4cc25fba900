"""Experiment harness: multi-seed runs, result tables, RPD and performance profiles."""
from __future__ import annotations

import csv
import functools
import logging
import math
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from rkgrasp.decoders import PROBLEMS, make_decoder
from rkgrasp.driver import ALGORITHMS, RunRecord, SolverParams, solve
from rkgrasp.io import read_instance

log = logging.getLogger(__name__)

CSV_COLUMNS = ("problem", "instance", "algo", "seed", "best_cost", "time_to_best_s",
               "wall_s", "decode_calls")
PROFILE_COLUMNS = ("algo", "tau", "rho")


class BaselineError(ValueError):
    """RPD is undefined for a non-positive reference cost."""


class ProfileError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """One algorithm over a set of instance files and seeds.

    ``time_limit=None`` applies the size rule (seconds = instance size)
    unless ``decode_budget`` is set, in which case runs are deterministic.
    """

    problem: str
    instances: list[str]
    algo: str = "rk-grasp-rvnd"
    seeds: list[int] = field(default_factory=lambda: list(range(5)))
    time_limit: float | None = None
    decode_budget: int | None = None
    h_s: float = 0.125
    h_e: float = 0.00098
    workers: int = 1
    bks: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}; choose from {PROBLEMS}")
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}; choose from {sorted(ALGORITHMS)}")
        if not self.instances:
            raise ValueError("need at least one instance")
        if not self.seeds:
            raise ValueError("need at least one seed")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def params_for(self, size: int, seed: int) -> SolverParams:
        limit = self.time_limit
        if limit is None and self.decode_budget is None:
            limit = float(size)
        return SolverParams(h_s=self.h_s, h_e=self.h_e, time_limit=limit, seed=seed,
                            max_decode_calls=self.decode_budget)


def parse_seeds(text: str) -> list[int]:
    """``"5"`` means seeds 0..4; ``"3,7,11"`` lists them explicitly."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) == 1:
        return list(range(int(parts[0])))
    return [int(p) for p in parts]


def load_config(path) -> ExperimentConfig:
    """Read a ``key = value`` file; ``#`` starts a comment."""
    raw: dict[str, str] = {}
    for no, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{no}: expected 'key = value'")
        raw[key.strip()] = value.strip()
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    kw: dict = {}
    for key, value in raw.items():
        if key == "instances":
            base = Path(path).parent
            names = [p.strip() for p in value.split(",") if p.strip()]
            kw[key] = [p if Path(p).is_absolute() else str(base / p) for p in names]
        elif key == "seeds":
            kw[key] = parse_seeds(value)
        elif key == "bks":
            kw[key] = {k.strip(): float(v) for k, v in
                       (item.split(":") for item in value.split(",") if item.strip())}
        elif key in ("time_limit", "h_s", "h_e"):
            kw[key] = float(value)
        elif key in ("decode_budget", "workers"):
            kw[key] = int(value)
        else:
            kw[key] = value
    return ExperimentConfig(**kw)


def rpd(found: float, bks: float) -> float:
    """Relative percentage deviation ``100 * (found - bks) / bks``."""
    if not bks > 0:
        raise BaselineError(f"RPD needs a positive reference cost, got {bks}")
    return 100.0 * (found - bks) / bks


@dataclass
class ResultRow:
    problem: str
    record: RunRecord
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class InstanceSummary:
    instance: str
    runs: int
    best: float
    avrg: float
    time: float
    bks: float | None = None
    gap: float | None = None
    arpd: float | None = None


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)
    bks: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_records(cls, records, problem: str = "", bks=None) -> "ResultTable":
        return cls([ResultRow(problem, r) for r in records], dict(bks or {}))

    def sorted_rows(self) -> list[ResultRow]:
        return sorted(self.rows, key=lambda r: (r.record.instance, r.record.seed))

    @property
    def instances(self) -> list[str]:
        return sorted({r.record.instance for r in self.rows})

    @property
    def algos(self) -> list[str]:
        return sorted({r.record.algo for r in self.rows})

    def summary(self, instance: str) -> InstanceSummary:
        recs = [r.record for r in self.rows if r.record.instance == instance and not r.failed]
        if not recs:
            return InstanceSummary(instance, 0, math.inf, math.inf, math.inf, self.bks.get(instance))
        costs = [r.best_cost for r in recs]
        s = InstanceSummary(instance, len(recs), min(costs), sum(costs) / len(costs),
                            sum(r.time_to_best for r in recs) / len(recs))
        ref = self.bks.get(instance)
        if ref is not None:
            s.bks = ref
            s.gap = rpd(s.best, ref)
            s.arpd = sum(rpd(c, ref) for c in costs) / len(costs)
        return s

    def summaries(self) -> list[InstanceSummary]:
        return [self.summary(i) for i in self.instances]


# running --------------------------------------------------------------------

@functools.lru_cache(maxsize=32)
def _load(problem: str, path: str):
    inst = read_instance(problem, path)
    return inst, make_decoder(inst)


def _run_one(job) -> ResultRow:
    cfg, path, seed = job
    name = Path(path).stem
    try:
        inst, dec = _load(cfg.problem, path)
        rec = solve(dec, cfg.algo, cfg.params_for(inst.size, seed), instance=name)
        rec.best_keys = None
        return ResultRow(cfg.problem, rec)
    except Exception as e:  # recorded, the experiment goes on
        log.error("run %s seed %d failed: %s", name, seed, e)
        rec = RunRecord(name, cfg.algo, seed, math.nan, math.nan, 0, math.nan)
        return ResultRow(cfg.problem, rec, error="".join(traceback.format_exception_only(e)).strip())


def run_experiment(config: ExperimentConfig) -> ResultTable:
    """Every (instance, seed) pair once; rows come back in (instance, seed) order."""
    jobs = [(config, str(p), s) for p in config.instances for s in config.seeds]
    if config.workers == 1 or len(jobs) == 1:
        rows = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_run_one, jobs))
    table = ResultTable(rows, dict(config.bks))
    table.rows = table.sorted_rows()
    return table


# output ---------------------------------------------------------------------

def _num(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def emit_csv(table: ResultTable, path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for row in table.sorted_rows():
                r = row.record
                w.writerow([row.problem, r.instance, r.algo, r.seed, _num(r.best_cost),
                            f"{r.time_to_best:.6f}", f"{r.wall_time:.6f}", r.decode_calls])
    except OSError as e:
        raise OSError(f"cannot write results to {path}: {e.strerror}") from e


def read_csv(path) -> ResultTable:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for d in csv.DictReader(fh):
            rec = RunRecord(d["instance"], d["algo"], int(d["seed"]), float(d["best_cost"]),
                            float(d["time_to_best_s"]), int(d["decode_calls"]), float(d["wall_s"]))
            failed = math.isnan(rec.best_cost)
            rows.append(ResultRow(d["problem"], rec, "failed run" if failed else None))
    return ResultTable(rows)


# performance profiles -------------------------------------------------------

@dataclass
class Profile:
    """Step functions ``rho_a(tau)``; ``ratios[a]`` holds one ``r_{i,a}`` per instance."""

    ratios: dict[str, list[float]]

    def rho(self, algo: str, tau: float) -> float:
        r = self.ratios[algo]
        return sum(1 for v in r if v <= tau) / len(r)

    def points(self) -> list[tuple[str, float, float]]:
        """``(algo, tau, rho)`` at every breakpoint, starting at ``tau = 1``."""
        taus = sorted({1.0} | {v for r in self.ratios.values() for v in r if math.isfinite(v)})
        return [(a, t, self.rho(a, t)) for a in sorted(self.ratios) for t in taus]


def performance_profile(tables: dict[str, ResultTable], accuracy: float = 1.0,
                        bks: dict[str, float] | None = None,
                        time_floor: float = 1e-6) -> Profile:
    """Time-based performance profile over algorithms sharing an instance set.

    ``t_{i,a}`` is the mean time-to-best of algorithm ``a`` on instance ``i``;
    it becomes infinite when the best-of-seeds cost is more than ``accuracy``
    percent above the reference (``bks`` if given, else the best any
    algorithm found).  Times are floored at ``time_floor`` so that ratios
    stay defined when a run finds its best immediately.
    """
    if len(tables) < 2:
        raise ProfileError("a performance profile needs at least two algorithms")
    sets = {a: tuple(t.instances) for a, t in tables.items()}
    first = next(iter(sets.values()))
    if any(s != first for s in sets.values()):
        raise ProfileError(f"algorithms were run on different instance sets: {sets}")
    if not first:
        raise ProfileError("no instances")
    bks = dict(bks or {})
    summaries = {a: {s.instance: s for s in t.summaries()} for a, t in tables.items()}
    times: dict[str, list[float]] = {a: [] for a in tables}
    for inst in first:
        ref = bks.get(inst, min(summaries[a][inst].best for a in tables))
        for a in tables:
            s = summaries[a][inst]
            ok = s.runs > 0 and math.isfinite(s.best) and (
                s.best <= ref or (ref > 0 and rpd(s.best, ref) <= accuracy))
            times[a].append(max(s.time, time_floor) if ok else math.inf)
    ratios: dict[str, list[float]] = {a: [] for a in tables}
    for i in range(len(first)):
        best = min(times[a][i] for a in tables)
        for a in tables:
            t = times[a][i]
            ratios[a].append(t / best if math.isfinite(t) else math.inf)
    return Profile(ratios)


def emit_profile_tsv(profile: Profile, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\t".join(PROFILE_COLUMNS) + "\n")
            for algo, tau, rho in profile.points():
                fh.write(f"{algo}\t{tau!r}\t{rho!r}\n")
    except OSError as e:
        raise OSError(f"cannot write profile to {path}: {e.strerror}") from e


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
