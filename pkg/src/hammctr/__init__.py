"""Exact solvers, reductions and gadget generators for Hamming-metric
closest/remotest string problems.

Submodules: core (instances, naive and brute-force solvers), inclexcl
(subset-counting solvers for small dimension), matmul (distance-matrix
solvers for large dimension), codes (constant-weight families), reductions
(closest <-> remotest equivalences), satgadget (q-ary SAT pipeline), cli.
"""

from .core import (
    DistanceMatrix,
    SolveResult,
    StringSet,
    brute_continuous_closest,
    brute_continuous_remotest,
    hamming,
    naive_closest,
    naive_remotest,
    read_instance,
    write_instance,
)
from .kernels import IMPL as KERNEL_IMPL

__all__ = [
    "DistanceMatrix",
    "SolveResult",
    "StringSet",
    "brute_continuous_closest",
    "brute_continuous_remotest",
    "hamming",
    "naive_closest",
    "naive_remotest",
    "read_instance",
    "write_instance",
    "KERNEL_IMPL",
]
