"""Job sequencing and tool switching (SSP) with KTNS magazine management."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from rkgrasp.core import DecodedSolution, Decoder


class InfeasibleJobError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SspInstance:
    """``tools[t, k]`` is True when job ``t`` needs tool ``k``."""

    tools: np.ndarray
    capacity: int
    name: str = "ssp"

    def __post_init__(self):
        a = np.ascontiguousarray(self.tools, dtype=np.bool_)
        if a.ndim != 2:
            raise ValueError("tool matrix must be 2-D (jobs x tools)")
        need = a.sum(axis=1)
        bad = np.flatnonzero(need > self.capacity)
        if bad.size:
            raise InfeasibleJobError(
                f"job {int(bad[0]) + 1} needs {int(need[bad[0]])} tools, "
                f"magazine holds {self.capacity}")
        a.setflags(write=False)
        object.__setattr__(self, "tools", a)

    @property
    def n_jobs(self) -> int:
        return self.tools.shape[0]

    @property
    def n_tools(self) -> int:
        return self.tools.shape[1]

    @property
    def size(self) -> int:
        return self.n_jobs

    def __eq__(self, other):
        return (isinstance(other, SspInstance) and self.capacity == other.capacity
                and np.array_equal(self.tools, other.tools))


@numba.njit(cache=True)
def _ktns(seq, req, capacity):
    n = seq.shape[0]
    m = req.shape[1]
    never = n + 1
    # next_use[t, k]: first position >= t whose job needs tool k
    next_use = np.empty((n + 1, m), dtype=np.int64)
    next_use[n, :] = never
    for t in range(n - 1, -1, -1):
        job = seq[t]
        for k in range(m):
            next_use[t, k] = t if req[job, k] else next_use[t + 1, k]
    loaded = np.zeros(m, dtype=np.bool_)
    count = 0
    switches = 0
    for t in range(n):
        job = seq[t]
        for k in range(m):
            if not req[job, k] or loaded[k]:
                continue
            if count < capacity:
                loaded[k] = True
                count += 1
                continue
            victim = -1
            far = -1
            for u in range(m):
                # >= keeps the higher index on equal next use
                if loaded[u] and not req[job, u] and next_use[t + 1, u] >= far:
                    far = next_use[t + 1, u]
                    victim = u
            loaded[victim] = False
            loaded[k] = True
            switches += 1
    return switches


def ktns_switches(sequence, inst: SspInstance) -> int:
    """Tool switches for a fixed job order under Keep Tool Needed Soonest.

    Tools are loaded when first needed; loads into free slots are the initial
    loading and cost nothing.  Once the magazine is full, each missing tool
    replaces the loaded tool (not used by the current job) whose next use lies
    farthest ahead, the higher tool index on ties, and counts one switch.
    """
    seq = np.asarray(sequence, dtype=np.int64)
    return int(_ktns(seq, inst.tools, inst.capacity))


class SspDecoder(Decoder):
    integral = True

    def __init__(self, inst: SspInstance):
        self.inst = inst

    @property
    def dimension(self) -> int:
        return self.inst.n_jobs

    def decode(self, x):
        seq = np.argsort(x, kind="stable")
        cost = _ktns(seq, self.inst.tools, self.inst.capacity)
        return DecodedSolution(float(cost), tuple(int(j) for j in seq))

    def cost(self, x):
        return float(_ktns(np.argsort(x, kind="stable"), self.inst.tools, self.inst.capacity))

    def evaluate(self, sequence) -> float:
        if sorted(sequence) != list(range(self.inst.n_jobs)):
            raise ValueError("not a permutation of the jobs")
        return float(_ktns_reference(sequence, self.inst))


def _ktns_reference(sequence, inst: SspInstance) -> int:
    # plain-Python KTNS simulation used for cross-checking the kernel
    req = [set(np.flatnonzero(row).tolist()) for row in inst.tools]
    seq = list(sequence)
    magazine: set[int] = set()
    switches = 0
    for t, job in enumerate(seq):
        for k in sorted(req[job] - magazine):
            if len(magazine) < inst.capacity:
                magazine.add(k)
                continue

            def next_use(u):
                for s in range(t + 1, len(seq)):
                    if u in req[seq[s]]:
                        return s
                return len(seq) + 1

            victim = max(magazine - req[job], key=lambda u: (next_use(u), u))
            magazine.remove(victim)
            magazine.add(k)
            switches += 1
    return switches
