import itertools
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rkgrasp.decoders import ktns_switches

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"

# acceptance.py appends "criterion N: PASS/FAIL ..." lines here
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def data_dir():
    return DATA


# brute-force oracles ------------------------------------------------------

def tsp_optimum(d: np.ndarray) -> float:
    n = d.shape[0]
    best = math.inf
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        tour = (0, *perm)
        best = min(best, sum(d[tour[k], tour[(k + 1) % n]] for k in range(n)))
    return best


def ssp_optimum(inst) -> int:
    return min(ktns_switches(p, inst) for p in itertools.permutations(range(inst.n_jobs)))


def ncgpp_optimum(inst) -> float:
    nb, nr = inst.n_stations, inst.n_rncs
    h = inst.handover
    best = math.inf
    for assign in itertools.product(range(nr), repeat=nb):
        load = np.zeros(nr)
        for b, r in enumerate(assign):
            load[r] += inst.traffic[b]
        if np.any(load > inst.capacity):
            continue
        a = np.array(assign)
        best = min(best, float(h[a[:, None] != a[None, :]].sum()))
    return best


def stcp_optimum(a: np.ndarray) -> int:
    n = a.shape[1]
    for k in range(1, n + 1):
        for cols in itertools.combinations(range(n), k):
            if a[:, cols].any(axis=1).all():
                return k
    raise AssertionError("uncoverable")


def keys_for_order(order) -> np.ndarray:
    """A key vector whose ascending argsort is ``order``."""
    x = np.empty(len(order))
    for rank, i in enumerate(order):
        x[i] = (rank + 0.5) / len(order)
    return x
