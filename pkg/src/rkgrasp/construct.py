"""Semi-greedy construction over a grid of step ``h``.

Every unfixed coordinate is probed by a sampled line search; indices whose
best probe lies within ``min + alpha * (max - min)`` form the restricted
candidate list, and one of them is fixed to its best probed value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from rkgrasp.core import RngStream

CostFn = Callable[[np.ndarray], float]


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class LineSearchResult:
    value: float   # best key found for the coordinate
    cost: float    # cost with the coordinate set to ``value``


def probe_count(h: float) -> int:
    """Number of grid values a line search samples: ``ceil(log2(1/h)) + 1``."""
    return math.ceil(math.log2(1.0 / h)) + 1


def grid_values(xi: float, h: float) -> list[float]:
    """Feasible keys ``xi + k*h`` for ``k = 0, 1, -1, 2, -2, ...``, ``|k| <= 1/h``."""
    values = [xi]
    for k in range(1, math.floor(1.0 / h) + 1):
        for v in (xi + k * h, xi - k * h):
            if 0.0 <= v < 1.0:
                values.append(v)
    return values


def line_search(x: np.ndarray, h: float, i: int, f: CostFn, rng: RngStream) -> LineSearchResult:
    if not 0.0 < h <= 1.0:
        raise ParameterError(f"grid step must lie in (0, 1], got {h}")
    original = x[i]
    candidates = grid_values(float(original), h)
    q = probe_count(h)
    picks = range(len(candidates)) if len(candidates) <= q else rng.sample(len(candidates), q)
    best_r, best_f = float(original), math.inf
    try:
        for j in picks:
            x[i] = candidates[j]
            fx = f(x)
            if fx < best_f:
                best_f, best_r = fx, candidates[j]
    finally:
        x[i] = original
    return LineSearchResult(best_r, best_f)


def construct_greedy_randomized(x: np.ndarray, h: float, f: CostFn, rng: RngStream,
                                fx: float | None = None, alpha: float | None = None,
                                trace: list | None = None):
    """Return ``(x', cost(x'))``; the input vector is left untouched.

    ``fx`` is the cost of ``x`` if already known (saves one decode when no
    coordinate ends up changing).  ``alpha`` is normally drawn uniformly from
    ``[0, 1)`` once per call; pass it to pin the greediness.  When given,
    ``trace`` receives one dict per iteration with the chosen index, the
    candidate list and the reuse flag.
    """
    x = np.array(x, dtype=np.float64)
    n = x.shape[0]
    unfixed = list(range(n))
    if alpha is None:
        alpha = rng.unif(0.0, 1.0)
    reuse = False
    r = np.empty(n)
    g = np.empty(n)
    while unfixed:
        if not reuse:
            for i in unfixed:
                res = line_search(x, h, i, f, rng)
                r[i], g[i] = res.value, res.cost
        gu = g[unfixed]
        lo, hi = gu.min(), gu.max()
        threshold = lo + alpha * (hi - lo)
        rcl = [i for i in unfixed if g[i] <= threshold]
        j = rcl[rng.randint(len(rcl))]
        if x[j] == r[j]:
            reuse = True
        else:
            x[j] = r[j]
            fx = g[j]
            reuse = False
        unfixed.remove(j)
        if trace is not None:
            trace.append({"j": j, "rcl": rcl, "reuse": reuse, "alpha": alpha})
    if fx is None:
        fx = f(x)
    return x, float(fx)
