"""The RK-GRASP outer loop, its acceptance rule and the Multi-Start baseline."""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from rkgrasp.construct import construct_greedy_randomized
from rkgrasp.core import Decoder, RngStream, create_initial_solution
from rkgrasp.localsearch import ElitePool, grid_search, nelder_mead_from_pool, rvnd

log = logging.getLogger(__name__)

LOCAL_SEARCHES = ("grid", "nelder_mead", "rvnd")


@dataclass
class SolverParams:
    """Run configuration.

    With ``time_limit`` unset and ``max_decode_calls`` set the run is fully
    deterministic: the clock is virtual and advances with decode calls,
    reaching ``horizon`` (default: the decoder dimension, i.e. the
    size-in-seconds rule) exactly when the budget is spent.
    """

    h_s: float = 0.125
    h_e: float = 0.00098
    local_search: str = "rvnd"
    time_limit: float | None = None
    seed: int = 0
    max_decode_calls: int | None = None
    target_cost: float | None = None
    clock: str = "cpu"
    horizon: float | None = None
    elite_size: int = 10

    def __post_init__(self):
        if not 0.0 < self.h_e <= self.h_s <= 1.0:
            raise ValueError(f"need 0 < h_e <= h_s <= 1, got h_s={self.h_s}, h_e={self.h_e}")
        if self.local_search not in LOCAL_SEARCHES:
            raise ValueError(f"local search must be one of {LOCAL_SEARCHES}")
        if self.time_limit is None and self.max_decode_calls is None:
            raise ValueError("set a time limit, a decode-call budget, or both")
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time limit must be non-negative")
        if self.max_decode_calls is not None and self.max_decode_calls < 0:
            raise ValueError("decode-call budget must be non-negative")
        if self.clock not in ("cpu", "wall"):
            raise ValueError("clock must be 'cpu' or 'wall'")

    @property
    def deterministic(self) -> bool:
        return self.time_limit is None


@dataclass
class RunRecord:
    instance: str
    algo: str
    seed: int
    best_cost: float
    time_to_best: float
    decode_calls: int
    wall_time: float
    best_keys: np.ndarray | None = field(default=None, repr=False)


class BudgetExhausted(Exception):
    """Raised by :class:`SearchState` when the run must stop."""


class SearchState:
    """Counts decodes, keeps the incumbent and owns the run's clock.

    Calling the state evaluates a key vector; once a stopping rule fires,
    the next call raises :class:`BudgetExhausted`.
    """

    def __init__(self, decoder: Decoder, params: SolverParams):
        self.decoder = decoder
        self.params = params
        self.decode_calls = 0
        self.best_cost = math.inf
        self.best_keys: np.ndarray | None = None
        self.time_to_best = 0.0
        self.elite = ElitePool(params.elite_size)
        if params.deterministic:
            self.run_time = float(params.horizon or decoder.dimension)
            self._tick = None
        else:
            self.run_time = float(params.time_limit)
            self._tick = time.process_time if params.clock == "cpu" else time.perf_counter
            self._t0 = self._tick()

    @property
    def elapsed(self) -> float:
        if self._tick is None:
            return self.run_time * self.decode_calls / max(self.params.max_decode_calls, 1)
        return self._tick() - self._t0

    def __call__(self, x: np.ndarray) -> float:
        if stop_condition(self, self.params):
            raise BudgetExhausted
        fx = self.decoder.cost(x)
        self.decode_calls += 1
        if fx < self.best_cost:
            self.best_cost = fx
            self.best_keys = np.array(x, dtype=np.float64)
            self.time_to_best = self.elapsed
        return fx

    def record(self, instance: str, algo: str) -> RunRecord:
        return RunRecord(instance, algo, self.params.seed, self.best_cost,
                         self.time_to_best, self.decode_calls,
                         max(self.elapsed, self.time_to_best), self.best_keys)


def stop_condition(state: SearchState, params: SolverParams) -> bool:
    if params.max_decode_calls is not None and state.decode_calls >= params.max_decode_calls:
        return True
    if params.target_cost is not None and state.best_cost <= params.target_cost:
        return True
    return params.time_limit is not None and state.elapsed >= params.time_limit


def accept(cost_new: float, cost_cur: float, elapsed: float, run_time: float,
           rng: RngStream) -> bool:
    """Simulated-annealing acceptance ``exp(-delta / (run_time - elapsed))``."""
    delta = cost_new - cost_cur
    if delta <= 0:
        return True
    return rng.unif() < math.exp(-delta / max(run_time - elapsed, 1e-9))


def local_search(kind: str, x, fx, f, h, rng, elite):
    if kind == "grid":
        return grid_search(x, fx, f, h, rng)
    if kind == "nelder_mead":
        return nelder_mead_from_pool(x, fx, f, h, rng, elite)
    return rvnd(x, fx, f, h, rng, elite)


def rk_grasp(decoder: Decoder, params: SolverParams, instance: str = "",
             trace: list | None = None) -> RunRecord:
    """Random-key GRASP with grid halving and annealing-style acceptance.

    ``trace``, when given, receives ``(h, cost_after_local_search, improved)``
    for every inner iteration.
    """
    rng = RngStream(params.seed)
    state = SearchState(decoder, params)
    algo = {"grid": "rk-grasp-grid", "nelder_mead": "rk-grasp-nm"}.get(
        params.local_search, "rk-grasp-rvnd")
    n = decoder.dimension
    best = math.inf  # incumbent driving the grid halving
    try:
        while not stop_condition(state, params):
            x = create_initial_solution(n, rng)
            fx = state(x)
            h = params.h_s
            while h >= params.h_e:
                x1, f1 = construct_greedy_randomized(x, h, state, rng, fx)
                x2, f2 = local_search(params.local_search, x1, f1, state, h, rng, state.elite)
                state.elite.insert(x2, f2)
                improved = f2 < best
                if improved:
                    best = f2
                    log.debug("seed %d: new best %s at h=%g", params.seed, f2, h)
                else:
                    h /= 2
                if trace is not None:
                    trace.append((h, f2, improved))
                if accept(f2, fx, state.elapsed, state.run_time, rng):
                    x, fx = x2, f2
    except BudgetExhausted:
        pass
    return state.record(instance, algo)


def multi_start(decoder: Decoder, params: SolverParams, instance: str = "") -> RunRecord:
    """Decode independent random vectors until the budget runs out."""
    rng = RngStream(params.seed)
    state = SearchState(decoder, params)
    n = decoder.dimension
    try:
        while True:
            state(create_initial_solution(n, rng))
    except BudgetExhausted:
        pass
    return state.record(instance, "multi-start")


ALGORITHMS = {
    "rk-grasp-grid": ("grid", rk_grasp),
    "rk-grasp-nm": ("nelder_mead", rk_grasp),
    "rk-grasp-rvnd": ("rvnd", rk_grasp),
    "multi-start": (None, multi_start),
}


def solve(decoder: Decoder, algo: str, params: SolverParams, instance: str = "") -> RunRecord:
    try:
        kind, fn = ALGORITHMS[algo]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {sorted(ALGORITHMS)}") from None
    if kind is not None and params.local_search != kind:
        params = SolverParams(**{**params.__dict__, "local_search": kind})
    return fn(decoder, params, instance)
