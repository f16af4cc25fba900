"""Instance generators: Steiner triple systems and small random instances."""
from __future__ import annotations

import itertools

import numpy as np

from rkgrasp.decoders import NcgppInstance, SspInstance, StcpInstance, ThlpInstance, TspInstance


def affine_plane_9() -> list[tuple[int, int, int]]:
    """The 12 lines of AG(2, 3), the unique Steiner triple system on 9 points."""
    pts = [(a, b) for a in range(3) for b in range(3)]
    idx = {p: i for i, p in enumerate(pts)}
    lines = set()
    for p, q in itertools.combinations(pts, 2):
        r = ((-p[0] - q[0]) % 3, (-p[1] - q[1]) % 3)
        lines.add(tuple(sorted((idx[p], idx[q], idx[r]))))
    return sorted(lines)


# A Steiner triple system on 15 points with covering number 8.  Tripled
# twice it gives the 135-point system whose best known cover has 103 columns;
# the projective-space STS(15) gives a different, easier system.
STS15 = (
    (0, 1, 10), (0, 2, 3), (0, 4, 9), (0, 5, 12), (0, 6, 8), (0, 7, 14), (0, 11, 13),
    (1, 2, 5), (1, 3, 13), (1, 4, 14), (1, 6, 7), (1, 8, 12), (1, 9, 11), (2, 4, 6),
    (2, 7, 9), (2, 8, 10), (2, 11, 12), (2, 13, 14), (3, 4, 12), (3, 5, 7), (3, 6, 11),
    (3, 8, 9), (3, 10, 14), (4, 5, 11), (4, 7, 8), (4, 10, 13), (5, 6, 10), (5, 8, 13),
    (5, 9, 14), (6, 9, 13), (6, 12, 14), (7, 10, 11), (7, 12, 13), (8, 11, 14), (9, 10, 12),
)


def projective_space_15() -> list[tuple[int, int, int]]:
    """The 35 lines of PG(3, 2): triples {a, b, a xor b} of nonzero 4-bit vectors."""
    lines = {tuple(sorted((a - 1, b - 1, (a ^ b) - 1)))
             for a, b in itertools.combinations(range(1, 16), 2)}
    return sorted(lines)


def triple_system(n: int, triples) -> tuple[int, list[tuple[int, int, int]]]:
    """Steiner triple system on ``3n`` points from one on ``n`` points.

    Point ``(i, level)`` becomes ``level * n + i``.  Triples: each old triple
    on every level, the three copies of each old point, and one transversal
    triple per old triple and assignment of its points to the three levels.
    """
    out = []
    for t in triples:
        for k in range(3):
            out.append(tuple(k * n + i for i in t))
    for i in range(n):
        out.append((i, n + i, 2 * n + i))
    for t in triples:
        for a, b, c in itertools.permutations(t):
            out.append((a, n + b, 2 * n + c))
    return 3 * n, out


def steiner_system(v: int) -> list[tuple[int, int, int]]:
    """The triple systems behind the stn benchmark family (v = 9 or 15 times 3^k)."""
    base = v
    while base % 3 == 0 and base not in (9, 15):
        base //= 3
    if base == 9:
        n, triples = 9, affine_plane_9()
    elif base == 15:
        n, triples = 15, list(STS15)
    else:
        raise ValueError(f"no construction for {v} points")
    while n < v:
        n, triples = triple_system(n, triples)
    return triples


def stcp_instance(v: int) -> StcpInstance:
    triples = steiner_system(v)
    a = np.zeros((len(triples), v), dtype=bool)
    for r, t in enumerate(triples):
        a[r, list(t)] = True
    return StcpInstance(a, name=f"stn{v}", steiner=True)


FANO_ROWS = [
    [1, 1, 1, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 1, 0],
    [1, 0, 0, 1, 1, 0, 0],
    [1, 0, 0, 0, 0, 1, 1],
    [0, 0, 1, 1, 0, 0, 1],
    [0, 1, 0, 0, 1, 0, 1],
]


def fano_instance() -> StcpInstance:
    return StcpInstance(np.array(FANO_ROWS, dtype=bool), name="fano")


def random_tsp(n: int, rng: np.random.Generator, scale: int = 1000) -> TspInstance:
    pts = rng.integers(0, scale, size=(n, 2))
    d = np.rint(np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)))
    return TspInstance(d, name=f"rand-tsp-{n}")


def random_ssp(jobs: int, tools: int, capacity: int, rng: np.random.Generator,
               density: float = 0.35) -> SspInstance:
    a = np.zeros((jobs, tools), dtype=bool)
    for t in range(jobs):
        k = int(rng.integers(1, capacity + 1))
        k = max(1, min(k, int(round(density * tools)) + 1, capacity))
        a[t, rng.choice(tools, size=k, replace=False)] = True
    return SspInstance(a, capacity, name=f"rand-ssp-{jobs}-{tools}-{capacity}")


def random_ncgpp(stations: int, rncs: int, rng: np.random.Generator,
                 slack: float = 1.3) -> NcgppInstance:
    traffic = rng.integers(1, 20, size=stations).astype(float)
    h = rng.integers(0, 100, size=(stations, stations)).astype(float)
    h[rng.random((stations, stations)) < 0.4] = 0.0
    np.fill_diagonal(h, 0.0)
    cap = np.full(rncs, np.ceil(slack * traffic.sum() / rncs))
    return NcgppInstance(traffic, cap, h, name=f"rand-ncgpp-{stations}-{rncs}")


def random_thlp(n: int, p: int, rng: np.random.Generator, discount: float = 0.2) -> ThlpInstance:
    pts = rng.random((n, 2)) * 100
    c = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    w = rng.integers(0, 50, size=(n, n)).astype(float)
    np.fill_diagonal(w, 0.0)
    return ThlpInstance(c, w, p, discount, name=f"rand-thlp-{n}-{p}")
