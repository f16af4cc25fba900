"""Random-key GRASP: a problem-independent search over the unit hypercube.

A problem plugs in through a :class:`~rkgrasp.core.Decoder`, which maps a
vector of keys in ``[0, 1)`` to a feasible solution and its cost.
"""
from rkgrasp.core import Decoder, DecodedSolution, RngStream
from rkgrasp.driver import ALGORITHMS, RunRecord, SolverParams, multi_start, rk_grasp, solve

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "Decoder", "DecodedSolution", "RngStream", "RunRecord", "SolverParams",
    "multi_start", "rk_grasp", "solve",
]
