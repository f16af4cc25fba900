"""Random-key representation, the seeded random stream and the decoder base.

A candidate solution is a float64 numpy vector whose entries (the random keys)
all lie in the half-open interval ``[0, 1)``.  The solver never looks at the
problem itself: it hands key vectors to a :class:`Decoder`, which turns them
into a feasible solution and its cost.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

#: Distance kept between the largest admissible key and 1.
KEY_EPS = 1e-12
KEY_MAX = 1.0 - KEY_EPS


class InvalidDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class DecodedSolution:
    """A decoded key vector: objective value plus the problem-level artifact."""

    cost: float
    artifact: Any


class RngStream:
    """Seeded source of randomness owned by exactly one solver run.

    Backed by numpy's PCG64 bit generator, whose output stream is fixed for a
    given seed across platforms and numpy releases (numpy's stream-stability
    policy for ``Generator`` core methods).
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.gen = np.random.Generator(np.random.PCG64(self.seed))

    def unif(self, a: float = 0.0, b: float = 1.0) -> float:
        """UnifRand(a, b): a real in ``[a, b)``."""
        return a + (b - a) * self.gen.random()

    def random(self, size: int) -> np.ndarray:
        return self.gen.random(size)

    def randint(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        return int(self.gen.integers(n))

    def permutation(self, n: int) -> np.ndarray:
        return self.gen.permutation(n)

    def sample(self, n: int, k: int) -> np.ndarray:
        """``k`` distinct indices from ``range(n)``, in draw order."""
        return self.gen.choice(n, size=k, replace=False)

    def spawn_seed(self) -> int:
        return int(self.gen.integers(2**63))


class Decoder(ABC):
    """Maps key vectors of a fixed dimension to solutions of one instance.

    Implementations are pure: the same vector always yields the same
    solution, the input is never modified, and no randomness is consumed.
    """

    #: Set by subclasses whose costs are always integral.
    integral = False

    @property
    @abstractmethod
    def dimension(self) -> int:
        ...

    @abstractmethod
    def decode(self, x: np.ndarray) -> DecodedSolution:
        ...

    def cost(self, x: np.ndarray) -> float:
        """Objective value of ``x``; subclasses override with a faster path."""
        return self.decode(x).cost

    @abstractmethod
    def evaluate(self, artifact: Any) -> float:
        """Recompute the objective of an artifact independently of decoding."""

    def __call__(self, x: np.ndarray) -> float:
        return self.cost(x)


def create_initial_solution(n: int, rng: RngStream) -> np.ndarray:
    if n < 1:
        raise InvalidDimensionError(f"dimension must be positive, got {n}")
    return rng.random(n)


def clamp_key(v: float) -> float:
    if not math.isfinite(v):
        raise FloatingPointError(f"non-finite key {v!r}")
    return min(max(v, 0.0), KEY_MAX)


def clamp_keys(x: np.ndarray) -> np.ndarray:
    """Vectorised :func:`clamp_key`; returns a new array."""
    if not np.all(np.isfinite(x)):
        raise FloatingPointError("non-finite key in vector")
    return np.clip(x, 0.0, KEY_MAX)


def in_key_domain(x: np.ndarray) -> bool:
    return bool(np.all((x >= 0.0) & (x < 1.0)))
