"""Node capacitated graph partitioning (handover minimisation)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from rkgrasp.core import DecodedSolution, Decoder


@dataclass(frozen=True, eq=False)
class NcgppInstance:
    traffic: np.ndarray     # T_b per base station
    capacity: np.ndarray    # C_r per RNC
    handover: np.ndarray    # H[b1, b2]
    name: str = "ncgpp"

    def __post_init__(self):
        t = np.ascontiguousarray(self.traffic, dtype=np.float64)
        c = np.ascontiguousarray(self.capacity, dtype=np.float64)
        h = np.ascontiguousarray(self.handover, dtype=np.float64)
        if t.ndim != 1 or c.ndim != 1 or h.shape != (t.size, t.size):
            raise ValueError("shape mismatch between traffic, capacities and handovers")
        if np.any(t < 0):
            raise ValueError("traffic must be non-negative")
        if np.any(c <= 0):
            raise ValueError("RNC capacities must be positive")
        if np.any(np.diag(h) != 0) or np.any(h < 0):
            raise ValueError("handovers must be non-negative with H(b, b) = 0")
        for a in (t, c, h):
            a.setflags(write=False)
        object.__setattr__(self, "traffic", t)
        object.__setattr__(self, "capacity", c)
        object.__setattr__(self, "handover", h)

    @property
    def n_stations(self) -> int:
        return self.traffic.size

    @property
    def n_rncs(self) -> int:
        return self.capacity.size

    @property
    def size(self) -> int:
        return self.n_stations

    @property
    def penalty(self) -> float:
        """Price of one unassigned station; exceeds every feasible cut."""
        return float(self.handover.sum()) + 1.0

    def __eq__(self, other):
        return (isinstance(other, NcgppInstance)
                and np.array_equal(self.traffic, other.traffic)
                and np.array_equal(self.capacity, other.capacity)
                and np.array_equal(self.handover, other.handover))


@numba.njit(cache=True)
def _assign(order, n_seed, traffic, capacity, sym):
    nb = order.shape[0]
    nr = capacity.shape[0]
    rnc = np.full(nb, -1, dtype=np.int64)
    load = np.zeros(nr)
    # affinity[b, r]: handovers (both directions) between b and members of r
    affinity = np.zeros((nb, nr))
    for t in range(nb):
        b = order[t]
        chosen = -1
        if t < n_seed:
            if load[t] + traffic[b] <= capacity[t]:
                chosen = t
        else:
            best = -1.0
            for r in range(nr):
                if load[r] + traffic[b] <= capacity[r] and affinity[b, r] > best:
                    best = affinity[b, r]
                    chosen = r
        if chosen >= 0:
            rnc[b] = chosen
            load[chosen] += traffic[b]
            for u in range(nb):
                affinity[u, chosen] += sym[u, b]
    return rnc


@numba.njit(cache=True)
def _cut(rnc, h, penalty):
    nb = rnc.shape[0]
    total = 0.0
    for a in range(nb):
        for b in range(nb):
            if a != b and (rnc[a] < 0 or rnc[a] != rnc[b]):
                total += h[a, b]
    for a in range(nb):
        if rnc[a] < 0:
            total += penalty
    return total


class NcgppDecoder(Decoder):
    """Assign base stations to RNCs in key order.

    The last key fixes how many stations seed separate RNCs
    (``ceil(key * |N|)``); every later station joins the capacity-feasible
    RNC with which it shares the most handovers, lowest index on ties.
    Stations that fit nowhere stay unassigned and are charged a penalty.
    """

    def __init__(self, inst: NcgppInstance):
        self.inst = inst
        self._sym = np.ascontiguousarray(inst.handover + inst.handover.T)
        self._penalty = inst.penalty

    @property
    def dimension(self) -> int:
        return self.inst.n_stations + 1

    def n_seeds(self, x) -> int:
        return min(math.ceil(float(x[-1]) * self.inst.n_rncs), self.inst.n_rncs)

    def _run(self, x):
        nb = self.inst.n_stations
        order = np.argsort(x[:nb], kind="stable")
        return _assign(order, self.n_seeds(x), self.inst.traffic,
                       self.inst.capacity, self._sym)

    def decode(self, x):
        rnc = self._run(x)
        return DecodedSolution(_cut(rnc, self.inst.handover, self._penalty),
                               tuple(int(r) for r in rnc))

    def cost(self, x):
        return _cut(self._run(x), self.inst.handover, self._penalty)

    def evaluate(self, assignment) -> float:
        """Cut weight plus penalties; ``-1`` marks an unassigned station."""
        inst = self.inst
        load = np.zeros(inst.n_rncs)
        for b, r in enumerate(assignment):
            if r >= 0:
                load[r] += inst.traffic[b]
        if np.any(load > inst.capacity):
            raise ValueError("RNC capacity exceeded")
        h = inst.handover
        total = 0.0
        for a, ra in enumerate(assignment):
            for b, rb in enumerate(assignment):
                if a != b and (ra < 0 or ra != rb):
                    total += float(h[a, b])
        for r in assignment:
            if r < 0:
                total += self._penalty
        return total
