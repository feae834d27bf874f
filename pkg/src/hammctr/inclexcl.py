"""O(n * 2^d) discrete solvers built on counting-by-subsets.

The key identity: whether two strings are within distance k can be written as
a signed sum over index subsets I of [d] with |I| >= d-k, with coefficient
(-1)^(|I|-d+k) * C(|I|-1, d-k-1), of the indicator [x[I] = y[I]].  Summing
over a whole string set turns the indicators into part sizes of the
agreement partitions P_I, which a refinement sweep computes in O(n) per
subset.  Only the per-cardinality aggregates S[x, l] are needed to answer
radius and remoteness queries.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import SolveResult, as_symbols, dtype_for
from .errors import BudgetError

D_MAX_DEFAULT = 24
DEFAULT_OP_BUDGET = 1 << 33  # n * 2^d elementary refine steps
INT64_SAFE = (1 << 62) - 1


# ---------------------------------------------------------------------------
# binomials


class BinomialTable:
    """Pascal-triangle table of exact integer binomial coefficients."""

    def __init__(self, a_max):
        self.a_max = a_max
        rows = [[1]]
        for a in range(1, a_max + 1):
            prev = rows[-1]
            row = [1] + [prev[b - 1] + (prev[b] if b < a else 0) for b in range(1, a)] + [1]
            rows.append(row)
        self._rows = rows

    def c(self, a, b):
        if b < 0 or b > a:
            return 0
        return self._rows[a][b]


def zero_sum_identity(m, ell):
    """sum_{i=0..ell} (-1)^i C(m+ell-1, m+i-1) C(m+i-1, m-1); contract: 0."""
    if m < 1 or ell < 1:
        raise ValueError("need m >= 1 and ell >= 1")
    tab = BinomialTable(m + ell)
    return sum((-1) ** i * tab.c(m + ell - 1, m + i - 1) * tab.c(m + i - 1, m - 1) for i in range(ell + 1))


def one_sum_identity(m, ell):
    """sum_{i=0..ell} (-1)^i C(m+ell, m+i) C(m+i-1, m-1); contract: 1."""
    if m < 1 or ell < 0:
        raise ValueError("need m >= 1 and ell >= 0")
    tab = BinomialTable(m + ell)
    return sum((-1) ** i * tab.c(m + ell, m + i) * tab.c(m + i - 1, m - 1) for i in range(ell + 1))


def hd_leq_indicator(x, y, k, cap=1 << 22):
    """Evaluate the full 2^d-term signed sum for [HD(x,y) <= k].

    Exact integer arithmetic over all subsets I with |I| >= d-k.  The result
    equals 1 when HD(x, y) <= k and 0 otherwise.
    """
    xs = as_symbols(x)
    ys = as_symbols(y)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("x and y must be equal-length 1-d sequences")
    d = len(xs)
    if not 0 <= k < d:
        raise ValueError(f"need 0 <= k < d, got k={k} d={d}")
    if 2**d > cap:
        raise BudgetError(f"2^{d} subsets exceed the cap of {cap}")
    eq_mask = 0
    for i in range(d):
        if xs[i] == ys[i]:
            eq_mask |= 1 << i
    tab = BinomialTable(max(1, d - 1))
    total = 0
    for subset in range(1 << d):
        size = subset.bit_count()
        if size < d - k:
            continue
        if subset & ~eq_mask:
            continue  # x[I] != y[I]
        total += (-1) ** (size - d + k) * tab.c(size - 1, d - k - 1)
    return total


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class Partition:
    """Partition of [n] as flat part ids plus per-part sizes.

    part_of is an O(1) array lookup; refinement is linear in n.  The
    generation counter records how many refinement steps produced it.
    """

    n: int
    part_id: np.ndarray
    sizes: np.ndarray
    generation: int = 0

    def __post_init__(self):
        pid = np.ascontiguousarray(self.part_id, dtype=np.int32)
        pid.flags.writeable = False
        object.__setattr__(self, "part_id", pid)
        sizes = np.ascontiguousarray(self.sizes, dtype=np.int64)
        sizes.flags.writeable = False
        object.__setattr__(self, "sizes", sizes)
        if int(sizes.sum()) != self.n:
            raise ValueError("part sizes must sum to n")

    @property
    def num_parts(self):
        return len(self.sizes)

    def part_of(self, i):
        return int(self.part_id[i])

    def blocks(self):
        """Canonical frozenset-of-blocks view (for equality checks)."""
        out = {}
        for i, p in enumerate(self.part_id):
            out.setdefault(int(p), []).append(i)
        return frozenset(tuple(b) for b in out.values())

    def same_blocks(self, other):
        return self.n == other.n and self.blocks() == other.blocks()

    @classmethod
    def trivial(cls, n):
        return cls(n=n, part_id=np.zeros(n, dtype=np.int32), sizes=np.array([n], dtype=np.int64))

    @classmethod
    def from_labels(cls, labels):
        labels = np.asarray(labels)
        _, pid = np.unique(labels, return_inverse=True)
        sizes = np.bincount(pid).astype(np.int64)
        return cls(n=len(labels), part_id=pid.astype(np.int32), sizes=sizes)


def refine(p, q):
    """Common refinement {P & Q}; linear time, constant-time part queries."""
    if p.n != q.n:
        raise ValueError(f"universe mismatch: {p.n} vs {q.n}")
    if p.num_parts * q.num_parts <= 1 << 24:
        new_pid, sizes = kernels.refine_partition(
            p.part_id, np.ascontiguousarray(q.part_id, dtype=np.uint32), p.num_parts, q.num_parts
        )
    else:
        # sparse keyspace: same sorted-key labelling via np.unique
        key = p.part_id.astype(np.int64) * q.num_parts + q.part_id
        _, new_pid = np.unique(key, return_inverse=True)
        new_pid = new_pid.astype(np.int32)
        sizes = np.bincount(new_pid).astype(np.int64)
    return Partition(n=p.n, part_id=new_pid, sizes=sizes, generation=max(p.generation, q.generation) + 1)


def position_partition(inst, i):
    """Partition of the strings by their symbol at position i."""
    col = inst.data[:, i]
    new_pid, sizes = kernels.refine_partition(
        np.zeros(inst.n, dtype=np.int32), col.astype(dtype_for(inst.sigma)), 1, inst.sigma
    )
    return Partition(n=inst.n, part_id=new_pid, sizes=sizes, generation=0)


# ---------------------------------------------------------------------------
# count tables


@dataclass(frozen=True)
class CountTables:
    """Agreement counts per string: S[x, l] aggregates T[x, I] over |I| = l.

    T is retained (indexed by subset bitmask) only when small enough to
    matter for diagnostics; the solvers consume S alone.
    """

    n: int
    d: int
    s: np.ndarray  # (n, d+1) int64
    t: np.ndarray | None = field(default=None, repr=False)

    def s_count(self, x, ell):
        return int(self.s[x, ell])

    def t_count(self, x, subset_mask):
        if self.t is None:
            raise ValueError("T table was not retained (set keep_t=True)")
        return int(self.t[subset_mask, x])

    def dump_s_csv(self):
        lines = ["x," + ",".join(f"l{ell}" for ell in range(self.d + 1))]
        for x in range(self.n):
            lines.append(f"{x}," + ",".join(str(int(v)) for v in self.s[x]))
        return "\n".join(lines) + "\n"


def build_count_tables(inst, d_max=D_MAX_DEFAULT, op_budget=DEFAULT_OP_BUDGET, keep_t=None):
    """Agreement-count tables for all strings and all index subsets.

    Sweeps every subset I of [d] by refining the partition of its predecessor
    I' = I minus its lowest set bit with the single-position partition of
    that bit; the traversal is depth-first over that predecessor tree so only
    d+1 partitions are alive at once.  T[x, I] is the size of x's part in
    P_I, and S[x, |I|] accumulates those sizes per cardinality.
    """
    n, d = inst.n, inst.d
    if d > d_max:
        raise BudgetError(f"dimension {d} exceeds d_max={d_max} for the subset sweep")
    ops = n * (1 << d)
    if ops > op_budget:
        raise BudgetError(
            f"n * 2^d = {ops} exceeds the op budget of {op_budget}; use the naive solver instead"
        )
    if keep_t is None:
        keep_t = (1 << d) * n <= 1 << 22
    data = inst.data
    cols = [np.ascontiguousarray(data[:, i], dtype=dtype_for(inst.sigma)) for i in range(d)]

    s_table = np.zeros((n, d + 1), dtype=np.int64)
    s_table[:, 0] = n
    t_table = None
    if keep_t:
        t_table = np.zeros((1 << d, n), dtype=np.int64)
        t_table[0] = n

    root_pid = np.zeros(n, dtype=np.int32)
    root_sizes = np.array([n], dtype=np.int64)

    # stack entries: (subset_mask, lowest_set_bit_or_d, part_ids, sizes)
    stack = [(0, d, root_pid, root_sizes)]
    while stack:
        mask, low, pid, sizes = stack.pop()
        if mask:
            card = mask.bit_count()
            s_table[:, card] += sizes[pid]
            if keep_t:
                t_table[mask] = sizes[pid]
        for i in range(low):
            child_pid, child_sizes = kernels.refine_partition(pid, cols[i], len(sizes), inst.sigma)
            stack.append((mask | (1 << i), i, child_pid, child_sizes))
    return CountTables(n=n, d=d, s=s_table, t=t_table)


# ---------------------------------------------------------------------------
# radius / remoteness tests and solvers


def _coefficients(d, k, tab):
    """Signed coefficients (-1)^(l-d+k) C(l-1, d-k-1) for l = d-k .. d."""
    return [(-1) ** (ell - d + k) * tab.c(ell - 1, d - k - 1) for ell in range(d - k, d + 1)]


def _sum_bound(n, d, k, tab):
    """Exact upper bound on sum_l |coeff_l| * S[x, l]."""
    return sum(abs(c) * n * tab.c(d, ell) for ell, c in zip(range(d - k, d + 1), _coefficients(d, k, tab)))


def _signed_sums(tables, k, tab):
    """The signed subset-counting sum for every string at threshold k (exact)."""
    d = tables.d
    coeffs = _coefficients(d, k, tab)
    if _sum_bound(tables.n, d, k, tab) <= INT64_SAFE:
        cvec = np.array(coeffs, dtype=np.int64)
        return tables.s[:, d - k :] @ cvec
    # exact big-integer fallback for extreme (n, d)
    out = np.empty(tables.n, dtype=object)
    for x in range(tables.n):
        out[x] = sum(int(c) * int(v) for c, v in zip(coeffs, tables.s[x, d - k :]))
    return out


def radius_leq(x_index, k, tables, n):
    """Whether r(x, X) <= k, by the signed-sum identity (exact arithmetic)."""
    if not 0 <= k < tables.d:
        raise ValueError(f"need 0 <= k < d, got k={k}")
    tab = BinomialTable(max(1, tables.d))
    coeffs = _coefficients(tables.d, k, tab)
    total = sum(int(c) * int(v) for c, v in zip(coeffs, tables.s[x_index, tables.d - k :]))
    return total == n


def remoteness_gt(x_index, k, tables):
    """Whether d(x, X minus x) > k; duplicated strings fail for every k >= 0."""
    if not 0 <= k < tables.d:
        raise ValueError(f"need 0 <= k < d, got k={k}")
    tab = BinomialTable(max(1, tables.d))
    coeffs = _coefficients(tables.d, k, tab)
    total = sum(int(c) * int(v) for c, v in zip(coeffs, tables.s[x_index, tables.d - k :]))
    return total == 1


def inclexcl_closest(inst, d_max=D_MAX_DEFAULT, op_budget=DEFAULT_OP_BUDGET, tables=None):
    """Discrete closest string via the subset-counting tables.

    Ascending scan over k; the first (k, x) passing the radius test wins,
    ties at equal k by lowest string index.  If no k < d succeeds the radius
    is d and index 0 is returned by convention.
    """
    if tables is None:
        tables = build_count_tables(inst, d_max=d_max, op_budget=op_budget)
    n, d = inst.n, inst.d
    tab = BinomialTable(max(1, d))
    for k in range(d):
        sums = _signed_sums(tables, k, tab)
        hits = np.nonzero(sums == n)[0] if sums.dtype != object else [x for x in range(n) if sums[x] == n]
        if len(hits):
            idx = int(hits[0])
            return SolveResult(
                center_index=idx,
                center_string=inst.data[idx],
                objective=k,
                algorithm="inclexcl-closest",
                counters={"subsets": 1 << d},
            )
    return SolveResult(
        center_index=0,
        center_string=inst.data[0],
        objective=d,
        algorithm="inclexcl-closest",
        counters={"subsets": 1 << d},
    )


def inclexcl_remotest(inst, d_max=D_MAX_DEFAULT, op_budget=DEFAULT_OP_BUDGET, tables=None):
    """Discrete remotest string via the subset-counting tables.

    Descending scan over k; the first (k, x) passing the remoteness test
    yields objective k+1.  If none succeeds every string has a duplicate and
    the objective is 0.
    """
    if inst.n < 2:
        raise ValueError("remoteness undefined on fewer than two strings")
    if tables is None:
        tables = build_count_tables(inst, d_max=d_max, op_budget=op_budget)
    n, d = inst.n, inst.d
    tab = BinomialTable(max(1, d))
    for k in range(d - 1, -1, -1):
        sums = _signed_sums(tables, k, tab)
        hits = np.nonzero(sums == 1)[0] if sums.dtype != object else [x for x in range(n) if sums[x] == 1]
        if len(hits):
            idx = int(hits[0])
            return SolveResult(
                center_index=idx,
                center_string=inst.data[idx],
                objective=k + 1,
                algorithm="inclexcl-remotest",
                counters={"subsets": 1 << d},
            )
    return SolveResult(
        center_index=0,
        center_string=inst.data[0],
        objective=0,
        algorithm="inclexcl-remotest",
        counters={"subsets": 1 << d},
    )
