"""Tree hub location: hubs, allocations and the hub tree from three key segments.

Layout of a key vector for ``n`` nodes and ``p`` hubs::

    [ node keys (n) | allocation keys (n - p) | hub-pair keys (p(p-1)/2) ]

Sorting the node keys makes the first ``p`` nodes hubs (their sorted position
is the hub *slot*).  The k-th non-hub in ascending node index reads the k-th
allocation key and is sent to slot ``min(floor(key * p), p - 1)``.  Hub-pair
keys are listed for slot pairs ``(a, b), a < b`` in lexicographic order; they
are sorted and fed to Kruskal, which keeps the first ``p - 1`` acyclic pairs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from rkgrasp.core import DecodedSolution, Decoder


@dataclass(frozen=True, eq=False)
class ThlpInstance:
    """``cost[i, j]`` is the unit transport cost, ``demand[i, j]`` the flow.

    Flow from ``i`` to ``j`` travels ``i -> hub(i)`` (times ``collection``),
    along the hub-tree path (times ``discount``) and ``hub(j) -> j`` (times
    ``distribution``).
    """

    cost: np.ndarray
    demand: np.ndarray
    p: int
    discount: float
    collection: float = 1.0
    distribution: float = 1.0
    name: str = "thlp"

    def __post_init__(self):
        c = np.ascontiguousarray(self.cost, dtype=np.float64)
        w = np.ascontiguousarray(self.demand, dtype=np.float64)
        n = c.shape[0]
        if c.shape != (n, n) or w.shape != (n, n):
            raise ValueError("cost and demand must be square matrices of equal size")
        if not 1 <= self.p <= n:
            raise ValueError(f"hub count p={self.p} outside [1, {n}]")
        if not 0.0 < self.discount <= 1.0:
            raise ValueError(f"discount factor {self.discount} outside (0, 1]")
        for a in (c, w):
            a.setflags(write=False)
        object.__setattr__(self, "cost", c)
        object.__setattr__(self, "demand", w)

    @property
    def n(self) -> int:
        return self.cost.shape[0]

    @property
    def size(self) -> int:
        return self.n

    @property
    def dimension(self) -> int:
        return thlp_dimension(self.n, self.p)

    def __eq__(self, other):
        return (isinstance(other, ThlpInstance)
                and (self.p, self.discount, self.collection, self.distribution)
                == (other.p, other.discount, other.collection, other.distribution)
                and np.array_equal(self.cost, other.cost)
                and np.array_equal(self.demand, other.demand))


def thlp_dimension(n: int, p: int) -> int:
    return n + (n - p) + p * (p - 1) // 2


@dataclass(frozen=True)
class HubSolution:
    hubs: tuple[int, ...]             # node index per hub slot
    allocation: tuple[int, ...]       # hub node serving each node
    edges: tuple[tuple[int, int], ...]  # tree edges as hub node pairs


@numba.njit(cache=True)
def _tree(pair_order, pa, pb, p):
    parent = np.arange(p)
    edges = np.empty((max(p - 1, 0), 2), dtype=np.int64)
    k = 0
    for t in range(pair_order.shape[0]):
        if k == p - 1:
            break
        e = pair_order[t]
        ra = pa[e]
        while parent[ra] != ra:
            ra = parent[ra]
        rb = pb[e]
        while parent[rb] != rb:
            rb = parent[rb]
        if ra != rb:
            parent[ra] = rb
            edges[k, 0] = pa[e]
            edges[k, 1] = pb[e]
            k += 1
    return edges


@numba.njit(cache=True)
def _objective(hubs, slot_of, edges, c, w, alpha, chi, delta):
    n = slot_of.shape[0]
    p = hubs.shape[0]
    # path cost between hub slots over the tree
    adj = np.full((p, p), -1.0)
    for k in range(edges.shape[0]):
        a, b = edges[k, 0], edges[k, 1]
        adj[a, b] = c[hubs[a], hubs[b]]
        adj[b, a] = c[hubs[b], hubs[a]]
    path = np.zeros((p, p))
    stack = np.empty(p, dtype=np.int64)
    seen = np.zeros(p, dtype=np.bool_)
    for s in range(p):
        seen[:] = False
        seen[s] = True
        stack[0] = s
        top = 1
        while top > 0:
            top -= 1
            u = stack[top]
            for v in range(p):
                if adj[u, v] >= 0.0 and not seen[v]:
                    seen[v] = True
                    path[s, v] = path[s, u] + adj[u, v]
                    stack[top] = v
                    top += 1
    hub_flow = np.zeros((p, p))
    collect = 0.0
    distribute = 0.0
    for i in range(n):
        hi = hubs[slot_of[i]]
        for j in range(n):
            wij = w[i, j]
            if wij == 0.0:
                continue
            collect += wij * c[i, hi]
            distribute += wij * c[hubs[slot_of[j]], j]
            hub_flow[slot_of[i], slot_of[j]] += wij
    transfer = 0.0
    for a in range(p):
        for b in range(p):
            transfer += hub_flow[a, b] * path[a, b]
    return chi * collect + alpha * transfer + delta * distribute


class ThlpDecoder(Decoder):
    def __init__(self, inst: ThlpInstance):
        self.inst = inst
        p = inst.p
        pairs = [(a, b) for a in range(p) for b in range(a + 1, p)]
        self._pa = np.array([a for a, _ in pairs], dtype=np.int64)
        self._pb = np.array([b for _, b in pairs], dtype=np.int64)

    @property
    def dimension(self) -> int:
        return self.inst.dimension

    def _structure(self, x):
        inst = self.inst
        n, p = inst.n, inst.p
        if x.shape[0] != self.dimension:
            raise ValueError(f"expected {self.dimension} keys, got {x.shape[0]}")
        order = np.argsort(x[:n], kind="stable")
        hubs = order[:p].astype(np.int64)
        slot_of = np.empty(n, dtype=np.int64)
        slot_of[hubs] = np.arange(p)
        non_hubs = np.sort(order[p:])
        slots = np.minimum((x[n:2 * n - p] * p).astype(np.int64), p - 1)
        slot_of[non_hubs] = slots
        edges = _tree(np.argsort(x[2 * n - p:], kind="stable"), self._pa, self._pb, p)
        return hubs, slot_of, edges

    def _cost(self, hubs, slot_of, edges):
        inst = self.inst
        return _objective(hubs, slot_of, edges, inst.cost, inst.demand,
                          inst.discount, inst.collection, inst.distribution)

    def decode(self, x):
        hubs, slot_of, edges = self._structure(x)
        sol = HubSolution(
            hubs=tuple(int(h) for h in hubs),
            allocation=tuple(int(hubs[s]) for s in slot_of),
            edges=tuple((int(hubs[a]), int(hubs[b])) for a, b in edges),
        )
        return DecodedSolution(self._cost(hubs, slot_of, edges), sol)

    def cost(self, x):
        return self._cost(*self._structure(x))

    def evaluate(self, sol: HubSolution) -> float:
        """Route every demand over an explicitly walked tree path."""
        inst = self.inst
        adj: dict[int, list[int]] = {h: [] for h in sol.hubs}
        for a, b in sol.edges:
            adj[a].append(b)
            adj[b].append(a)

        def walk(src, dst):
            prev = {src: None}
            todo = [src]
            while todo:
                u = todo.pop()
                for v in adj[u]:
                    if v not in prev:
                        prev[v] = u
                        todo.append(v)
            if dst not in prev:
                raise ValueError("hub tree is disconnected")
            out = []
            while dst != src:
                out.append((prev[dst], dst))
                dst = prev[dst]
            return out

        c, w = inst.cost, inst.demand
        total = 0.0
        for i in range(inst.n):
            for j in range(inst.n):
                if w[i, j] == 0.0:
                    continue
                hi, hj = sol.allocation[i], sol.allocation[j]
                tree = sum(float(c[a, b]) for a, b in walk(hi, hj))
                total += float(w[i, j]) * (inst.collection * float(c[i, hi])
                                           + inst.discount * tree
                                           + inst.distribution * float(c[hj, j]))
        return total
