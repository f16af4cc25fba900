import math

import numpy as np
import pytest

from conftest import tsp_optimum
from rkgrasp.core import DecodedSolution, Decoder, RngStream, create_initial_solution
from rkgrasp import driver
from rkgrasp.decoders import TspDecoder
from rkgrasp.driver import (SearchState, SolverParams, accept, multi_start, rk_grasp, solve,
                            stop_condition)
from rkgrasp.generators import random_tsp


class Flat(Decoder):
    def __init__(self, n=2, value=1.0):
        self.n, self.value = n, value

    @property
    def dimension(self):
        return self.n

    def decode(self, x):
        return DecodedSolution(self.value, None)

    def evaluate(self, artifact):
        return self.value


class Recording(Decoder):
    def __init__(self, inner):
        self.inner, self.seen = inner, []

    @property
    def dimension(self):
        return self.inner.dimension

    def decode(self, x):
        sol = self.inner.decode(x)
        self.seen.append(sol.cost)
        return sol

    def evaluate(self, artifact):
        return self.inner.evaluate(artifact)


@pytest.mark.parametrize("kw", [dict(h_s=0.1, h_e=0.2), dict(h_e=0.0), dict(h_s=1.5),
                                dict(local_search="tabu"), dict(clock="sundial"),
                                dict(time_limit=-1.0)])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        SolverParams(**{"max_decode_calls": 10, **kw})


def test_params_need_a_stopping_rule():
    with pytest.raises(ValueError):
        SolverParams()


def test_halving_path_levels():
    trace = []
    rk_grasp(Flat(), SolverParams(max_decode_calls=60_000, seed=0), trace=trace)
    levels = {0.125 / 2 ** k for k in range(8)}
    assert {h for h, _, _ in trace} <= levels
    # a restart shows up as h jumping back up; without improvement each
    # restart walks 0.0625 ... 0.0009765625, i.e. seven grid levels
    restarts = [[trace[0]]]
    for prev, cur in zip(trace, trace[1:]):
        if cur[0] > prev[0]:
            restarts.append([])
        restarts[-1].append(cur)
    assert len(restarts) >= 3
    for run in restarts[1:-1]:
        assert [h for h, _, _ in run] == [0.125 / 2 ** k for k in range(1, 8)]
        assert not any(ok for _, _, ok in run)
    assert all(h >= 0.00098 / 2 for h, _, _ in trace)


def test_always_improving_never_halves(monkeypatch):
    costs = iter(range(-1, -10**6, -1))
    monkeypatch.setattr(driver, "local_search", lambda kind, x, fx, *a: (x, float(next(costs))))
    trace = []
    driver.rk_grasp(Flat(n=3), SolverParams(max_decode_calls=2000), trace=trace)
    assert trace and all(h == 0.125 and ok for h, _, ok in trace)


def test_zero_time_limit():
    rec = rk_grasp(Flat(), SolverParams(time_limit=0.0))
    assert rec.best_cost == math.inf and rec.decode_calls == 0


def test_zero_budget_stops_before_construction():
    rec = rk_grasp(Flat(), SolverParams(max_decode_calls=0))
    assert rec.decode_calls == 0 and rec.best_cost == math.inf


def test_stop_condition_boundaries():
    p = SolverParams(max_decode_calls=10)
    st = SearchState(Flat(), p)
    assert not stop_condition(st, p)
    st.decode_calls = 10
    assert stop_condition(st, p)
    # the virtual clock reaches run_time exactly with the budget
    assert st.elapsed == st.run_time
    p = SolverParams(time_limit=5.0)
    st = SearchState(Flat(), p)
    st._t0 = st._tick() - 5.0
    assert stop_condition(st, p)


def test_accept_rules():
    rng = RngStream(0)
    assert accept(3.0, 3.0, 0.0, 10.0, rng)
    assert accept(2.0, 3.0, 0.0, 10.0, rng)
    assert not any(accept(1e9, 0.0, 0.0, 100.0, rng) for _ in range(1000))
    # guard: elapsed at or past the horizon never divides by zero
    assert not accept(1.0, 0.0, 10.0, 10.0, rng)
    assert not accept(1.0, 0.0, 11.0, 10.0, rng)


def test_accept_frequency():
    rng = RngStream(2024)
    trials = 100_000
    hits = sum(accept(5.0, 0.0, 0.0, 100.0, rng) for _ in range(trials))
    p = math.exp(-0.05)
    assert abs(hits / trials - p) <= 0.005
    assert abs(hits - trials * p) <= 3 * math.sqrt(trials * p * (1 - p))


def test_incumbent_tracks_minimum():
    dec = Recording(TspDecoder(random_tsp(9, np.random.default_rng(1))))
    rec = rk_grasp(dec, SolverParams(max_decode_calls=4000, seed=3))
    assert rec.best_cost == min(dec.seen)
    assert rec.decode_calls == len(dec.seen) == 4000
    assert dec.inner(rec.best_keys) == rec.best_cost
    assert rec.time_to_best <= rec.wall_time


def test_search_state_monotone():
    dec = TspDecoder(random_tsp(8, np.random.default_rng(2)))
    st = SearchState(dec, SolverParams(max_decode_calls=500))
    rng = RngStream(0)
    history = []
    for _ in range(200):
        st(create_initial_solution(8, rng))
        history.append(st.best_cost)
    assert all(a >= b for a, b in zip(history, history[1:]))


def test_deterministic_mode_repeatable():
    dec = TspDecoder(random_tsp(12, np.random.default_rng(4)))
    for algo in ("rk-grasp-grid", "rk-grasp-nm", "rk-grasp-rvnd", "multi-start"):
        p = SolverParams(max_decode_calls=3000, seed=17)
        a, b = solve(dec, algo, p), solve(dec, algo, p)
        assert (a.best_cost, a.time_to_best, a.decode_calls, a.wall_time) == \
               (b.best_cost, b.time_to_best, b.decode_calls, b.wall_time)
        assert np.array_equal(a.best_keys, b.best_keys)
        assert a.algo == algo


def test_solve_unknown_algo():
    with pytest.raises(ValueError):
        solve(Flat(), "tabu", SolverParams(max_decode_calls=1))


def test_target_cost_stops_early():
    dec = TspDecoder(random_tsp(6, np.random.default_rng(0)))
    opt = tsp_optimum(dec.inst.dist)
    rec = rk_grasp(dec, SolverParams(max_decode_calls=10**6, target_cost=opt))
    assert rec.best_cost == opt and rec.decode_calls < 10**6


def test_multi_start_single_decode():
    dec = TspDecoder(random_tsp(7, np.random.default_rng(3)))
    rec = multi_start(dec, SolverParams(max_decode_calls=1, seed=8))
    assert rec.best_cost == dec(create_initial_solution(7, RngStream(8)))


def test_multi_start_near_optimal_small_tsp():
    good = 0
    for seed in range(100):
        dec = TspDecoder(random_tsp(6, np.random.default_rng(1000 + seed)))
        opt = tsp_optimum(dec.inst.dist)
        rec = multi_start(dec, SolverParams(max_decode_calls=10_000, seed=seed,
                                            target_cost=1.05 * opt))
        good += rec.best_cost <= 1.05 * opt
    assert good >= 95


def test_driver_dominates_multi_start():
    wins = 0
    for k in range(50):
        dec = TspDecoder(random_tsp(12, np.random.default_rng(500 + k)))
        p = SolverParams(max_decode_calls=5000, seed=k)
        wins += rk_grasp(dec, p).best_cost <= multi_start(dec, p).best_cost
    assert wins >= 40
