"""Large-dimension discrete solvers via the full pairwise distance matrix.

D = d*ones - A A^T where A is the sparse n x (d*sigma) occurrence indicator.
Columns are split by nonzero count at a threshold tau: heavy columns are
densified and multiplied as a cubic dense product, light columns contribute
per-column pair enumeration.  A packed popcount path replaces the split for
binary alphabets.  Work counters are recorded and checked against the
split's guarantees: light pair increments <= tau*n*d, heavy columns <= n*d/tau.
"""

import math
import os
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import DistanceMatrix, SolveResult
from .errors import BudgetError

AUTO = "auto"


def memory_budget_bytes():
    mb = int(os.environ.get("HAMMCTR_BUDGET_MB", "2048"))
    return mb * (1 << 20)


@dataclass(frozen=True)
class IndicatorMatrix:
    """Sparse 0/1 occurrence matrix: row i has nonzero column k*sigma+x_i[k]."""

    n: int
    d: int
    sigma: int
    cols: np.ndarray  # (n, d) int64, sorted ascending within each row

    @property
    def num_columns(self):
        return self.d * self.sigma

    def column_counts(self):
        return np.bincount(self.cols.ravel(), minlength=self.num_columns)


@dataclass(frozen=True)
class ColumnSplit:
    """Heavy/light column ids at threshold tau, with per-column counts."""

    tau: int
    heavy: np.ndarray
    light: np.ndarray
    counts: np.ndarray


def build_indicator(inst):
    offsets = np.arange(inst.d, dtype=np.int64) * inst.sigma
    cols = inst.data.astype(np.int64) + offsets[None, :]
    return IndicatorMatrix(n=inst.n, d=inst.d, sigma=inst.sigma, cols=cols)


def split_columns(indicator, tau):
    if tau < 1:
        raise ValueError("tau must be a positive integer")
    counts = indicator.column_counts()
    nonzero = np.nonzero(counts)[0]
    heavy = nonzero[counts[nonzero] >= tau]
    light = nonzero[counts[nonzero] < tau]
    return ColumnSplit(tau=tau, heavy=heavy, light=light, counts=counts)


def gram_heavy(indicator, split, budget_bytes=None):
    """A_H A_H^T by densifying the heavy columns (exact integer product).

    The densified 0/1 block is packed into machine words; co-occurrence
    counts come from row weights and XOR popcounts via
    |x AND y| = (|x| + |y| - |x XOR y|) / 2, all in exact integers.
    """
    n = indicator.n
    h = len(split.heavy)
    if h == 0:
        return np.zeros((n, n), dtype=np.int64), 0
    if budget_bytes is None:
        budget_bytes = memory_budget_bytes()
    if n * h > budget_bytes * 8:  # one bit per densified cell
        raise BudgetError(
            f"densifying {h} heavy columns needs {n * h} bits "
            f"(budget {budget_bytes * 8}); raise tau to shrink the heavy side"
        )
    col_rank = np.full(indicator.num_columns, -1, dtype=np.int64)
    col_rank[split.heavy] = np.arange(h)
    dense = np.zeros((n, h), dtype=np.uint8)
    ranks = col_rank[indicator.cols]  # (n, d), -1 where light
    rows = np.repeat(np.arange(n), indicator.d)
    flat = ranks.ravel()
    sel = flat >= 0
    dense[rows[sel], flat[sel]] = 1
    weights = dense.sum(axis=1, dtype=np.int64)
    packed = np.packbits(dense, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    packed = np.ascontiguousarray(packed).view(np.uint64)
    xor_pc = kernels.popcount_matrix(packed, packed).astype(np.int64)
    gram = (weights[:, None] + weights[None, :] - xor_pc) // 2
    return gram, h


def gram_light(indicator, split):
    """A_L A_L^T by per-column pair enumeration over the light columns."""
    n = indicator.n
    gram = np.zeros((n, n), dtype=np.int32)
    if len(split.light) == 0:
        return gram.astype(np.int64), 0
    flat_cols = indicator.cols.ravel()
    order = np.argsort(flat_cols, kind="stable")
    sorted_cols = flat_cols[order]
    row_ids = (order // indicator.d).astype(np.int32)
    light_mask = np.zeros(indicator.num_columns, dtype=bool)
    light_mask[split.light] = True
    keep = light_mask[sorted_cols]
    row_ids = np.ascontiguousarray(row_ids[keep])
    kept_cols = sorted_cols[keep]
    # offsets of each light column's row list inside row_ids
    boundaries = np.nonzero(np.diff(kept_cols))[0] + 1
    offsets = np.concatenate(([0], boundaries, [len(kept_cols)])).astype(np.int64)
    increments = kernels.light_pairs(row_ids, offsets, gram)
    return gram.astype(np.int64), int(increments)


def auto_tau(n, d):
    """tau = ceil(n^(1-eps)) with eps = 0.3*min(1, delta), delta = log_n d."""
    if n <= 1:
        return 1
    delta = math.log(max(d, 1)) / math.log(n)
    eps = 0.3 * min(1.0, delta)
    return max(1, math.ceil(n ** (1.0 - eps)))


def _popcount_blocked(packed, threads):
    n = packed.shape[0]
    if threads <= 1 or n < 2 * threads:
        return kernels.popcount_matrix(packed, packed)
    from concurrent.futures import ThreadPoolExecutor

    bounds = [(i * n // threads, (i + 1) * n // threads) for i in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda b: kernels.popcount_matrix(packed[b[0] : b[1]], packed), bounds))
    return np.concatenate(parts)


def distance_matrix(inst, tau=AUTO, use_popcount=None, budget_bytes=None, threads=1):
    """Full pairwise Hamming distance matrix with instrumentation counters.

    Returns (DistanceMatrix, counters).  `tau` may be AUTO or a positive
    integer; `use_popcount` selects the packed binary path (defaults to on
    for sigma=2).  The result is independent of both switches and of the
    thread count (row blocks are disjoint, sums are exact integers).
    """
    if budget_bytes is None:
        budget_bytes = memory_budget_bytes()
    n, d = inst.n, inst.d
    if n * n * 8 > budget_bytes:
        raise BudgetError(f"n^2 = {n * n} distance entries exceed the memory budget")
    if use_popcount is None:
        use_popcount = inst.sigma == 2
    if use_popcount and inst.sigma == 2:
        packed = inst.packed_bits()
        if n * n * 4 > budget_bytes:
            raise BudgetError(f"n^2 distance matrix exceeds budget of {budget_bytes} bytes")
        dist = _popcount_blocked(packed, threads)
        counters = {"path": "popcount", "packed_words": int(packed.shape[1]) * n}
        return DistanceMatrix(n=n, entries=dist.astype(np.int32)), counters

    if tau == AUTO:
        tau = auto_tau(n, d)
    indicator = build_indicator(inst)
    split = split_columns(indicator, tau)
    heavy_gram, h = gram_heavy(indicator, split, budget_bytes=budget_bytes)
    light_gram, increments = gram_light(indicator, split)
    gram = heavy_gram + light_gram
    dist = d - gram
    heavy_bound = n * d // tau
    light_bound = tau * n * d
    if h > heavy_bound:
        raise AssertionError(f"heavy column count {h} exceeds n*d/tau = {heavy_bound}")
    if increments > light_bound:
        raise AssertionError(f"light pair work {increments} exceeds tau*n*d = {light_bound}")
    counters = {
        "path": "heavy-light",
        "tau": int(tau),
        "heavy_columns": int(h),
        "heavy_bound": int(heavy_bound),
        "light_increments": int(increments),
        "light_bound": int(light_bound),
        "densified_cells": int(n * h),
    }
    return DistanceMatrix(n=n, entries=dist.astype(np.int32)), counters


def scalar_distance_matrix(inst):
    """Reference pairwise matrix by scalar symbol comparisons (no packing)."""
    data = inst.data
    n = inst.n
    out = np.empty((n, n), dtype=np.int32)
    block = max(1, (1 << 24) // max(1, n))
    for s in range(0, n, block):
        e = min(s + block, n)
        acc = np.zeros((e - s, n), dtype=np.int32)
        for k in range(inst.d):
            acc += data[s:e, k : k + 1] != data[:, k]
        out[s:e] = acc
    return out


def matmul_closest(inst, tau=AUTO, use_popcount=None, budget_bytes=None, threads=1):
    dm, counters = distance_matrix(
        inst, tau=tau, use_popcount=use_popcount, budget_bytes=budget_bytes, threads=threads
    )
    radii = dm.entries.max(axis=1)
    idx = int(np.argmin(radii))
    return SolveResult(
        center_index=idx,
        center_string=inst.data[idx],
        objective=int(radii[idx]),
        algorithm="matmul-closest",
        counters=counters,
    )


def matmul_remotest(inst, tau=AUTO, use_popcount=None, budget_bytes=None, threads=1):
    if inst.n < 2:
        raise ValueError("remoteness undefined on fewer than two strings")
    dm, counters = distance_matrix(
        inst, tau=tau, use_popcount=use_popcount, budget_bytes=budget_bytes, threads=threads
    )
    entries = dm.entries.astype(np.int64).copy()
    np.fill_diagonal(entries, np.iinfo(np.int64).max)
    remoteness = entries.min(axis=1)
    idx = int(np.argmax(remoteness))
    return SolveResult(
        center_index=idx,
        center_string=inst.data[idx],
        objective=int(remoteness[idx]),
        algorithm="matmul-remotest",
        counters=counters,
    )


def dump_distance_matrix(dm):
    """Row-major little-endian 32-bit binary dump."""
    return dm.entries.astype("<i4").tobytes()
