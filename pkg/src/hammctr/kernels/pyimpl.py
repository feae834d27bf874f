"""Pure-numpy implementations of the hot kernels.

Mirror of the compiled module in ``_speedups.pyx``; every function here is
bit-for-bit interchangeable with its compiled twin (integer arithmetic only,
same part-labelling rule), so the selector in ``__init__`` can pick either.
"""

import numpy as np

IMPL = "python"

_ROW_BLOCK = 512


def hamming_rowmax(data, lo, hi):
    """max_j HD(row_i, row_j) for i in [lo, hi), scalar per-symbol counting."""
    n, d = data.shape
    out = np.empty(hi - lo, dtype=np.int64)
    for start in range(lo, hi, _ROW_BLOCK):
        stop = min(start + _ROW_BLOCK, hi)
        blk = data[start:stop]
        acc = np.zeros((stop - start, n), dtype=np.int32)
        for k in range(d):
            acc += blk[:, k : k + 1] != data[:, k]
        out[start - lo : stop - lo] = acc.max(axis=1)
    return out


def hamming_rowmin_excl(data, lo, hi):
    """min_{j != i} HD(row_i, row_j) for i in [lo, hi); duplicates give 0."""
    n, d = data.shape
    out = np.empty(hi - lo, dtype=np.int64)
    for start in range(lo, hi, _ROW_BLOCK):
        stop = min(start + _ROW_BLOCK, hi)
        blk = data[start:stop]
        acc = np.zeros((stop - start, n), dtype=np.int32)
        for k in range(d):
            acc += blk[:, k : k + 1] != data[:, k]
        acc[np.arange(stop - start), np.arange(start, stop)] = np.iinfo(np.int32).max
        out[start - lo : stop - lo] = acc.min(axis=1)
    return out


def refine_partition(pid, col, nparts, sigma):
    """Refine part ids by one symbol column.

    Returns (new_pid, sizes): new part ids labelled by the rank of the
    (old part, symbol) key in sorted key order, and the per-part sizes.
    O(n + nparts*sigma), no sorting of the n elements.
    """
    key = pid.astype(np.int64) * sigma + col
    counts = np.bincount(key, minlength=nparts * sigma)
    occupied = counts > 0
    remap = np.cumsum(occupied, dtype=np.int64) - 1
    new_pid = remap[key].astype(np.int32)
    sizes = counts[occupied].astype(np.int64)
    return new_pid, sizes


def light_pairs(rows, offsets, gram):
    """Accumulate co-occurrence pairs of light columns into `gram`.

    rows[offsets[c]:offsets[c+1]] lists the nonzero row ids of light column c.
    Returns the number of pair increments performed (sum of count^2).
    """
    increments = 0
    for c in range(len(offsets) - 1):
        r = rows[offsets[c] : offsets[c + 1]]
        if len(r) == 0:
            continue
        gram[np.ix_(r, r)] += 1
        increments += int(len(r)) ** 2
    return increments


def popcount_matrix(a, b):
    """Pairwise popcount(a_i XOR b_j) over packed uint64 rows."""
    na = a.shape[0]
    nb = b.shape[0]
    out = np.empty((na, nb), dtype=np.int32)
    block = max(1, (1 << 22) // max(1, nb * a.shape[1]))
    for s in range(0, na, block):
        e = min(s + block, na)
        x = np.bitwise_xor(a[s:e, None, :], b[None, :, :])
        out[s:e] = np.bitwise_count(x).sum(axis=2, dtype=np.int32)
    return out
