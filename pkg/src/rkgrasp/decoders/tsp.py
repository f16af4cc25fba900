"""Travelling salesman: keys give an insertion order for cheapest insertion."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from rkgrasp.core import DecodedSolution, Decoder


@dataclass(frozen=True, eq=False)
class TspInstance:
    dist: np.ndarray
    name: str = "tsp"

    def __post_init__(self):
        d = np.ascontiguousarray(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if np.any(np.diag(d) != 0):
            raise ValueError("d(i, i) must be 0")
        if np.any(d < 0):
            raise ValueError("distances must be non-negative")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def size(self) -> int:
        return self.n

    def __eq__(self, other):
        return (isinstance(other, TspInstance) and self.name == other.name
                and np.array_equal(self.dist, other.dist))


@numba.njit(cache=True)
def _cheapest_insertion(order, d):
    n = order.shape[0]
    succ = np.empty(n, dtype=np.int64)
    a, b, c = order[0], order[1], order[2]
    succ[a] = b
    succ[b] = c
    succ[c] = a
    start = a
    for t in range(3, n):
        k = order[t]
        best_j = start
        best = np.inf
        j = start
        while True:
            s = succ[j]
            delta = d[j, k] + d[k, s] - d[j, s]
            if delta < best:
                best = delta
                best_j = j
            j = s
            if j == start:
                break
        succ[k] = succ[best_j]
        succ[best_j] = k
    tour = np.empty(n, dtype=np.int64)
    j = start
    for t in range(n):
        tour[t] = j
        j = succ[j]
    cost = 0.0
    for t in range(n - 1):
        cost += d[tour[t], tour[t + 1]]
    cost += d[tour[n - 1], tour[0]]
    return tour, cost


class TspDecoder(Decoder):
    """Sort cities by key, then build the tour by cheapest insertion.

    The sub-tour starts with the first three cities of the sorted order; each
    later city is inserted after the tour city ``j`` minimising
    ``d(j, k) + d(k, succ(j)) - d(j, succ(j))`` (first such ``j`` walking the
    tour from its first city wins ties).
    """

    def __init__(self, inst: TspInstance):
        if inst.n < 3:
            raise ValueError("TSP decoding needs at least 3 cities")
        self.inst = inst
        self._d = inst.dist

    @property
    def dimension(self) -> int:
        return self.inst.n

    def decode(self, x):
        tour, cost = _cheapest_insertion(np.argsort(x, kind="stable"), self._d)
        return DecodedSolution(cost, tuple(int(c) for c in tour))

    def cost(self, x):
        return _cheapest_insertion(np.argsort(x, kind="stable"), self._d)[1]

    def evaluate(self, tour) -> float:
        if sorted(tour) != list(range(self.inst.n)):
            raise ValueError("not a permutation of the cities")
        d = self._d
        total = 0.0
        for a, b in zip(tour, tour[1:]):
            total += float(d[a, b])
        return total + float(d[tour[-1], tour[0]])
