"""Steiner triple covering: keys order the columns of a greedy cover."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from rkgrasp.core import DecodedSolution, Decoder


class InfeasibleInstanceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StcpInstance:
    """Binary incidence matrix: rows are triples (sets to cover), columns are elements."""

    matrix: np.ndarray
    name: str = "stcp"
    steiner: bool = False

    def __post_init__(self):
        a = np.ascontiguousarray(self.matrix, dtype=np.bool_)
        if a.ndim != 2 or a.shape[0] < 1:
            raise ValueError("incidence matrix needs at least one row")
        if self.steiner:
            check_steiner(a)
        uncovered = np.flatnonzero(~a.any(axis=1))
        if uncovered.size:
            raise InfeasibleInstanceError(
                f"row {int(uncovered[0]) + 1} is not covered by any column")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def size(self) -> int:
        return self.n_cols

    def __eq__(self, other):
        return (isinstance(other, StcpInstance) and self.steiner == other.steiner
                and np.array_equal(self.matrix, other.matrix))


def check_steiner(a: np.ndarray) -> None:
    weights = a.sum(axis=1)
    bad = np.flatnonzero(weights != 3)
    if bad.size:
        raise ValueError(f"row {int(bad[0]) + 1}: row weight {int(weights[bad[0]])} != 3")
    co = a.T.astype(np.int64) @ a.astype(np.int64)
    np.fill_diagonal(co, 1)
    if np.any(co != 1):
        i, j = np.argwhere(co != 1)[0]
        raise ValueError(f"columns {i + 1} and {j + 1} share {co[i, j]} triples, expected 1")


def _csr(mask: np.ndarray):
    ptr = np.zeros(mask.shape[0] + 1, dtype=np.int64)
    ptr[1:] = np.cumsum(mask.sum(axis=1))
    idx = np.nonzero(mask)[1].astype(np.int64)
    return ptr, idx


@numba.njit(cache=True)
def _cover(order, col_ptr, col_rows, n_rows):
    n = order.shape[0]
    cover = np.zeros(n_rows, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    missing = n_rows
    for t in range(n):
        if missing == 0:
            break
        c = order[t]
        useful = False
        for p in range(col_ptr[c], col_ptr[c + 1]):
            if cover[col_rows[p]] == 0:
                useful = True
                break
        if useful:
            used[c] = True
            for p in range(col_ptr[c], col_ptr[c + 1]):
                r = col_rows[p]
                if cover[r] == 0:
                    missing -= 1
                cover[r] += 1
    count = 0
    for t in range(n):
        c = order[t]
        if not used[c]:
            continue
        redundant = True
        for p in range(col_ptr[c], col_ptr[c + 1]):
            if cover[col_rows[p]] < 2:
                redundant = False
                break
        if redundant:
            used[c] = False
            for p in range(col_ptr[c], col_ptr[c + 1]):
                cover[col_rows[p]] -= 1
        else:
            count += 1
    return used, count


class StcpDecoder(Decoder):
    """Greedy cover in key order followed by one redundancy-elimination pass.

    A column enters the cover when it covers at least one still uncovered row.
    Used columns are then revisited in the same order and dropped whenever
    every row they cover stays covered.  The cost is the cover size.
    """

    integral = True

    def __init__(self, inst: StcpInstance):
        self.inst = inst
        self._ptr, self._rows = _csr(inst.matrix.T)

    @property
    def dimension(self) -> int:
        return self.inst.n_cols

    def _run(self, x):
        return _cover(np.argsort(x, kind="stable"), self._ptr, self._rows, self.inst.n_rows)

    def decode(self, x):
        used, count = self._run(x)
        return DecodedSolution(float(count), tuple(int(c) for c in np.flatnonzero(used)))

    def cost(self, x):
        return float(self._run(x)[1])

    def evaluate(self, columns) -> float:
        cols = sorted(set(columns))
        if not self.inst.matrix[:, cols].any(axis=1).all():
            raise ValueError("columns do not cover every row")
        return float(len(cols))
