# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: scalar pairwise Hamming reductions, partition
refinement, light-column pair accumulation and packed popcount distances.

Outputs are bit-identical to hammctr.kernels.pyimpl (same labelling rule,
integer arithmetic only).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

IMPL = "compiled"

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #  define HAMMCTR_POPCOUNT64(x) __builtin_popcountll(x)
    #else
    static int HAMMCTR_POPCOUNT64(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; ++c; }
        return c;
    }
    #endif
    """
    int HAMMCTR_POPCOUNT64(unsigned long long x) nogil


ctypedef fused symbol_t:
    cnp.uint8_t
    cnp.uint16_t
    cnp.uint32_t


def hamming_rowmax(const symbol_t[:, ::1] data, Py_ssize_t lo, Py_ssize_t hi):
    """max_j HD(row_i, row_j) for i in [lo, hi), scalar per-symbol counting."""
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t d = data.shape[1]
    cdef cnp.ndarray out_arr = np.empty(hi - lo, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef cnp.ndarray acc_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] acc = acc_arr
    cdef Py_ssize_t i, j, k
    cdef symbol_t v
    cdef cnp.int32_t best
    with nogil:
        for i in range(lo, hi):
            for j in range(n):
                acc[j] = 0
            for k in range(d):
                v = data[i, k]
                for j in range(n):
                    acc[j] += data[j, k] != v
            best = 0
            for j in range(n):
                if acc[j] > best:
                    best = acc[j]
            out[i - lo] = best
    return out_arr


def hamming_rowmin_excl(const symbol_t[:, ::1] data, Py_ssize_t lo, Py_ssize_t hi):
    """min_{j != i} HD(row_i, row_j) for i in [lo, hi); duplicates give 0."""
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t d = data.shape[1]
    cdef cnp.ndarray out_arr = np.empty(hi - lo, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef cnp.ndarray acc_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] acc = acc_arr
    cdef Py_ssize_t i, j, k
    cdef symbol_t v
    cdef cnp.int32_t best
    with nogil:
        for i in range(lo, hi):
            for j in range(n):
                acc[j] = 0
            for k in range(d):
                v = data[i, k]
                for j in range(n):
                    acc[j] += data[j, k] != v
            best = 2147483647
            for j in range(n):
                if j != i and acc[j] < best:
                    best = acc[j]
            out[i - lo] = best
    return out_arr


def refine_partition(const cnp.int32_t[::1] pid, const symbol_t[::1] col, Py_ssize_t nparts, Py_ssize_t sigma):
    """Refine part ids by one symbol column; labels ranked by sorted key order."""
    cdef Py_ssize_t n = pid.shape[0]
    cdef Py_ssize_t keyspace = nparts * sigma
    cdef cnp.ndarray counts_arr = np.zeros(keyspace, dtype=np.int64)
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef cnp.ndarray new_pid_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] new_pid = new_pid_arr
    cdef Py_ssize_t i, k
    cdef Py_ssize_t rank = 0
    with nogil:
        for i in range(n):
            counts[pid[i] * sigma + col[i]] += 1
        for k in range(keyspace):
            if counts[k] > 0:
                rank += 1
    cdef cnp.ndarray sizes_arr = np.empty(rank, dtype=np.int64)
    cdef cnp.int64_t[::1] sizes = sizes_arr
    with nogil:
        rank = 0
        for k in range(keyspace):
            if counts[k] > 0:
                sizes[rank] = counts[k]
                counts[k] = rank  # reuse as remap table
                rank += 1
        for i in range(n):
            new_pid[i] = <cnp.int32_t> counts[pid[i] * sigma + col[i]]
    return new_pid_arr, sizes_arr


def light_pairs(const cnp.int32_t[::1] rows, const cnp.int64_t[::1] offsets, cnp.int32_t[:, ::1] gram):
    """Accumulate co-occurrence pairs of light columns into `gram`."""
    cdef Py_ssize_t ncols = offsets.shape[0] - 1
    cdef Py_ssize_t c, i, j, s, e
    cdef cnp.int32_t ri
    cdef long long increments = 0
    with nogil:
        for c in range(ncols):
            s = offsets[c]
            e = offsets[c + 1]
            for i in range(s, e):
                ri = rows[i]
                for j in range(s, e):
                    gram[ri, rows[j]] += 1
            increments += <long long> (e - s) * (e - s)
    return increments


def popcount_matrix(const cnp.uint64_t[:, ::1] a, const cnp.uint64_t[:, ::1] b):
    """Pairwise popcount(a_i XOR b_j) over packed uint64 rows."""
    cdef Py_ssize_t na = a.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t w = a.shape[1]
    cdef cnp.ndarray out_arr = np.empty((na, nb), dtype=np.int32)
    cdef cnp.int32_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef int acc
    with nogil:
        for i in range(na):
            for j in range(nb):
                acc = 0
                for k in range(w):
                    acc += HAMMCTR_POPCOUNT64(a[i, k] ^ b[j, k])
                out[i, j] = acc
    return out_arr
