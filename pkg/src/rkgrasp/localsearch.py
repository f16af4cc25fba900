"""Problem-independent local searches in the unit hypercube.

All searches take a key vector, its cost and a cost function, and return a
``(vector, cost)`` pair that is never worse than the input.  Only strictly
lower costs count as improvements.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from rkgrasp.core import KEY_MAX, RngStream, clamp_key, create_initial_solution

CostFn = Callable[[np.ndarray], float]

FAREY_7 = (
    Fraction(0, 1), Fraction(1, 7), Fraction(1, 6), Fraction(1, 5), Fraction(1, 4),
    Fraction(2, 7), Fraction(1, 3), Fraction(2, 5), Fraction(3, 7), Fraction(1, 2),
    Fraction(4, 7), Fraction(3, 5), Fraction(2, 3), Fraction(5, 7), Fraction(3, 4),
    Fraction(4, 5), Fraction(5, 6), Fraction(6, 7), Fraction(1, 1),
)
_FAREY = np.array([float(q) for q in FAREY_7])


def farey_sequence(order: int) -> list[Fraction]:
    """All reduced fractions in [0, 1] with denominator <= ``order``, ascending."""
    return sorted({Fraction(a, b) for b in range(1, order + 1) for a in range(b + 1)})


def grid_points(n: int, h: float) -> int:
    """Neighbourhood budget ``n * floor(1/h)`` shared by grid and simplex search."""
    return n * math.floor(1.0 / h)


class ElitePool:
    """Best distinct key vectors seen so far, sorted by cost, at most ``capacity``."""

    def __init__(self, capacity: int = 10):
        self.capacity = capacity
        self.entries: list[tuple[float, np.ndarray]] = []

    def __len__(self):
        return len(self.entries)

    def insert(self, x: np.ndarray, cost: float) -> bool:
        if len(self.entries) >= self.capacity and cost >= self.entries[-1][0]:
            return False
        if any(np.array_equal(x, y) for _, y in self.entries):
            return False
        pos = 0
        while pos < len(self.entries) and self.entries[pos][0] <= cost:
            pos += 1
        self.entries.insert(pos, (float(cost), np.array(x, dtype=np.float64)))
        del self.entries[self.capacity:]
        return True

    @property
    def best_cost(self) -> float:
        return self.entries[0][0] if self.entries else math.inf

    def pick_two(self, rng: RngStream):
        i, j = rng.sample(len(self.entries), 2)
        return self.entries[int(i)], self.entries[int(j)]


def h_step(xbar: np.ndarray, h: float, theta: float, rng: RngStream):
    """One h-neighbour of ``xbar`` together with the integer direction ``v``."""
    n = xbar.shape[0]
    up = rng.random(n) <= 0.5
    span = np.where(up, (1.0 - xbar) / h, xbar / h)
    # an empty draw range (key hugging the boundary) degenerates to a unit step
    span = np.maximum(span, 1.0)
    mag = np.maximum(np.ceil(1.0 + rng.random(n) * (span - 1.0)), 1.0)
    v = np.where(up, mag, -mag)
    moved = rng.random(n) <= theta
    y = np.where(moved, np.clip(xbar + h * v / np.linalg.norm(v), 0.0, KEY_MAX), xbar)
    return y, v, moved


def h_neighborhood(xbar: np.ndarray, h: float, theta: float, rng: RngStream) -> np.ndarray:
    return h_step(xbar, h, theta, rng)[0]


def grid_search(x: np.ndarray, fx: float, f: CostFn, h: float, rng: RngStream,
                theta: float | None = None):
    """First-improvement sampling of the h-neighbourhood.

    Stops once more than ``n * floor(1/h)`` consecutive samples failed to
    improve.  ``theta`` defaults to a fresh draw from ``[0.2, 0.4)``.
    """
    if theta is None:
        theta = rng.unif(0.2, 0.4)
    budget = grid_points(x.shape[0], h)
    xbar, fbar = x, fx
    examined = 0
    while examined <= budget:
        examined += 1
        y = h_neighborhood(xbar, h, theta, rng)
        fy = f(y)
        if fy < fbar:
            xbar, fbar = y, fy
            examined = 0
    return xbar, fbar


def ux_crossover(a: np.ndarray, b: np.ndarray, factor: int, rng: RngStream) -> np.ndarray:
    """Uniform crossover; ``factor=-1`` donates ``1 - b_i`` instead of ``b_i``."""
    if a.shape != b.shape:
        raise ValueError(f"parents differ in dimension: {a.shape} vs {b.shape}")
    if factor not in (1, -1):
        raise ValueError("factor must be +1 or -1")
    from_a = rng.random(a.shape[0]) < 0.5
    donor = b if factor == 1 else np.clip(1.0 - b, 0.0, KEY_MAX)
    return np.where(from_a, a, donor)


def nelder_mead_search(simplex, f: CostFn, h: float, rng: RngStream,
                       trace: list | None = None):
    """Discrete Nelder-Mead on three key vectors, moves built from UX.

    ``simplex`` holds three ``(vector, cost)`` pairs.  Runs ``n * floor(1/h)``
    iterations and returns the best vertex.
    """
    (x1, f1), (x2, f2), (x3, f3) = sorted(simplex, key=lambda e: e[1])
    x0 = ux_crossover(x1, x2, 1, rng)
    for _ in range(grid_points(x1.shape[0], h)):
        shrink = False
        xr = ux_crossover(x0, x3, -1, rng)
        fr = f(xr)
        if fr < f1:
            xe = ux_crossover(xr, x0, -1, rng)
            fe = f(xe)
            if fe < fr:
                x3, f3 = xe, fe
            else:
                x3, f3 = xr, fr
        elif fr < f2:
            x3, f3 = xr, fr
        elif fr < f3:
            xc = ux_crossover(xr, x0, 1, rng)
            fc = f(xc)
            if fc < fr:
                x3, f3 = xc, fc
            else:
                shrink = True
        else:
            xc = ux_crossover(x0, x3, 1, rng)
            fc = f(xc)
            if fc < f3:
                x3, f3 = xc, fc
            else:
                shrink = True
        if shrink:
            x2 = ux_crossover(x1, x2, 1, rng)
            f2 = f(x2)
            x3 = ux_crossover(x1, x3, 1, rng)
            f3 = f(x3)
        (x1, f1), (x2, f2), (x3, f3) = sorted([(x1, f1), (x2, f2), (x3, f3)],
                                              key=lambda e: e[1])
        if trace is not None:
            trace.append((f1, f2, f3))
        x0 = ux_crossover(x1, x2, 1, rng)
    return x1, f1


def swap_rk(x: np.ndarray, fx: float, f: CostFn, rng: RngStream):
    """Exchange pairs of keys; first improvement, rescan until a clean pass."""
    x = x.copy()
    n = x.shape[0]
    improved = True
    while improved:
        improved = False
        order = rng.permutation(n)
        for a in range(n - 1):
            i = order[a]
            for b in range(a + 1, n):
                j = order[b]
                if x[i] == x[j]:
                    continue
                x[i], x[j] = x[j], x[i]
                fy = f(x)
                if fy < fx:
                    fx = fy
                    improved = True
                    break
                x[i], x[j] = x[j], x[i]
            if improved:
                break
    return x, fx


def invert_rk(x: np.ndarray, fx: float, f: CostFn, rng: RngStream):
    """Replace single keys by ``1 - key``; first improvement with rescans."""
    x = x.copy()
    improved = True
    while improved:
        improved = False
        for i in rng.permutation(x.shape[0]):
            old = x[i]
            new = clamp_key(1.0 - old)
            if new == old:
                continue
            x[i] = new
            fy = f(x)
            if fy < fx:
                fx = fy
                improved = True
                break
            x[i] = old
    return x, fx


def farey_rk(x: np.ndarray, fx: float, f: CostFn, rng: RngStream):
    """Redraw single keys inside a random interval of consecutive F7 terms."""
    x = x.copy()
    intervals = len(_FAREY) - 1
    improved = True
    while improved:
        improved = False
        for i in rng.permutation(x.shape[0]):
            j = rng.randint(intervals)
            old = x[i]
            x[i] = clamp_key(rng.unif(_FAREY[j], _FAREY[j + 1]))
            fy = f(x)
            if fy < fx:
                fx = fy
                improved = True
                break
            x[i] = old
    return x, fx


def nelder_mead_from_pool(x: np.ndarray, fx: float, f: CostFn, h: float, rng: RngStream,
                          elite: ElitePool | None):
    """Nelder-Mead started from ``x`` plus two companions from the elite pool.

    Fresh random vectors stand in when the pool holds fewer than two entries.
    """
    if elite is not None and len(elite) >= 2:
        (c2, v2), (c3, v3) = elite.pick_two(rng)
        companions = [(v2, c2), (v3, c3)]
    else:
        companions = []
        for _ in range(2):
            y = create_initial_solution(x.shape[0], rng)
            companions.append((y, f(y)))
    return nelder_mead_search([(x, fx), *companions], f, h, rng)


NEIGHBORHOODS = ("grid", "nelder_mead", "swap", "invert", "farey")


def rvnd(x: np.ndarray, fx: float, f: CostFn, h: float, rng: RngStream,
         elite: ElitePool | None = None, theta: float | None = None,
         neighborhoods=NEIGHBORHOODS, trace: list | None = None):
    """Random variable neighbourhood descent over the five key neighbourhoods."""
    def apply(name, x, fx):
        if name == "grid":
            return grid_search(x, fx, f, h, rng, theta)
        if name == "nelder_mead":
            return nelder_mead_from_pool(x, fx, f, h, rng, elite)
        if name == "swap":
            return swap_rk(x, fx, f, rng)
        if name == "invert":
            return invert_rk(x, fx, f, rng)
        if name == "farey":
            return farey_rk(x, fx, f, rng)
        raise ValueError(f"unknown neighbourhood {name!r}")

    active = list(neighborhoods)
    while active:
        name = active[rng.randint(len(active))]
        y, fy = apply(name, x, fx)
        improved = fy < fx
        if improved:
            x, fx = y, fy
            active = list(neighborhoods)
        else:
            active.remove(name)
        if trace is not None:
            trace.append((name, improved))
    return x, fx
