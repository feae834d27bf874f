"""Instance representation, file I/O, Hamming primitives and the exhaustive
reference solvers every other module is cross-checked against.

The discrete baselines (`naive_closest`, `naive_remotest`) deliberately count
mismatches symbol by symbol -- they embody the O(n^2 d) exhaustive search and
never use packed-word tricks, so speedup comparisons against them are honest.
The continuous baselines sweep all sigma^d candidate strings.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BudgetError, FormatError

DEFAULT_ENUM_CAP = 1 << 26


def dtype_for(sigma):
    if sigma <= 1 << 8:
        return np.uint8
    if sigma <= 1 << 16:
        return np.uint16
    if sigma <= 1 << 32:
        return np.uint32
    raise ValueError(f"alphabet size {sigma} too large")


@dataclass(frozen=True)
class StringSet:
    """n strings of length d over the alphabet {0..sigma-1}.

    Immutable after construction (the data array is locked read-only), so
    instances are safe to share across threads.
    """

    n: int
    d: int
    sigma: int
    data: np.ndarray

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=dtype_for(self.sigma))
        if data.ndim != 2:
            raise ValueError("data must be a 2-d array")
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        if self.sigma < 2:
            raise ValueError("alphabet size must be at least 2")
        if data.shape != (self.n, self.d):
            raise ValueError(f"data shape {data.shape} does not match (n, d)=({self.n}, {self.d})")
        if data.size and int(data.max()) >= self.sigma:
            raise ValueError(f"symbol {int(data.max())} out of range for sigma={self.sigma}")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, rows, sigma):
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        return cls(n=arr.shape[0], d=arr.shape[1], sigma=sigma, data=arr.astype(dtype_for(sigma)))

    @classmethod
    def from_strings(cls, strings, sigma=None):
        """Build from digit strings like ["010", "112"]. Characters map via int()."""
        rows = [[int(ch) for ch in s] for s in strings]
        if sigma is None:
            sigma = max(2, 1 + max(max(r) for r in rows))
        return cls.from_rows(rows, sigma)

    def packed_bits(self):
        """Word-packed rows for binary instances (one bit per position).

        Built lazily on first use and cached; the array is locked read-only
        like the symbol data.
        """
        if self.sigma != 2:
            raise ValueError("packed representation is defined for sigma=2 only")
        cached = self.__dict__.get("_packed")
        if cached is not None:
            return cached
        bits = np.packbits(self.data.astype(np.uint8), axis=1, bitorder="little")
        pad = (-bits.shape[1]) % 8
        if pad:
            bits = np.pad(bits, ((0, 0), (0, pad)))
        packed = np.ascontiguousarray(bits).view(np.uint64)
        packed.flags.writeable = False
        object.__setattr__(self, "_packed", packed)
        return packed

    def row(self, i):
        return self.data[i]


@dataclass(frozen=True)
class SolveResult:
    """Solver output: chosen center, objective value and provenance."""

    center_index: int | None
    center_string: tuple
    objective: int
    algorithm: str
    counters: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "center_string", tuple(int(v) for v in self.center_string))


@dataclass(frozen=True)
class DistanceMatrix:
    """Full pairwise Hamming distance matrix."""

    n: int
    entries: np.ndarray

    def validate(self, d, rng=None, triples=64):
        """Check symmetry, zero diagonal, range and sampled triangle inequalities."""
        e = self.entries
        if e.shape != (self.n, self.n):
            raise ValueError("entries shape mismatch")
        if not np.array_equal(e, e.T):
            raise ValueError("distance matrix not symmetric")
        if np.any(np.diag(e) != 0):
            raise ValueError("nonzero diagonal")
        if e.min() < 0 or e.max() > d:
            raise ValueError("entry outside [0, d]")
        if rng is not None:
            for _ in range(triples):
                i = rng.next_below(self.n)
                j = rng.next_below(self.n)
                k = rng.next_below(self.n)
                if e[i, j] > e[i, k] + e[k, j]:
                    raise ValueError(f"triangle inequality fails on ({i},{j},{k})")
        return True


def as_symbols(x):
    """Coerce a str or int sequence to a 1-d numpy symbol array."""
    if isinstance(x, str):
        return np.frombuffer(x.encode("utf-8"), dtype=np.uint8)
    return np.asarray(x)


def hamming(x, y):
    """Number of positions where two equal-length symbol sequences differ."""
    xs = as_symbols(x)
    ys = as_symbols(y)
    if xs.shape != ys.shape:
        raise ValueError(f"length mismatch: {xs.shape} vs {ys.shape}")
    return int(np.count_nonzero(xs != ys))


# ---------------------------------------------------------------------------
# instance file format: '#' comments, then "n d sigma", then n rows of d symbols


def read_instance(text):
    """Parse the text instance format into a StringSet.

    Accepts bytes or str. Raises FormatError with a 1-based line number on
    malformed input.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    ln = 0
    header = None
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            continue
        if stripped == "":
            continue
        header = stripped
        break
    if header is None:
        raise FormatError("missing header line", line=len(lines) or 1)
    parts = header.split()
    if len(parts) != 3:
        raise FormatError(f"header must be 'n d sigma', got {header!r}", line=ln)
    try:
        n, d, sigma = (int(p) for p in parts)
    except ValueError:
        raise FormatError(f"non-integer header field in {header!r}", line=ln) from None
    if n < 1 or d < 1 or sigma < 2:
        raise FormatError(f"invalid dimensions n={n} d={d} sigma={sigma}", line=ln)
    rows = np.empty((n, d), dtype=np.int64)
    row_lines = lines[ln:]
    got = 0
    for off, raw in enumerate(row_lines):
        if got == n:
            if raw.strip():
                raise FormatError("trailing content after last row", line=ln + 1 + off)
            continue
        if raw.strip() == "":
            continue
        fields = raw.split()
        if len(fields) != d:
            raise FormatError(f"row has {len(fields)} symbols, expected {d}", line=ln + 1 + off)
        try:
            vals = [int(f) for f in fields]
        except ValueError:
            raise FormatError("non-integer symbol", line=ln + 1 + off) from None
        for v in vals:
            if v < 0 or v >= sigma:
                raise FormatError(f"symbol {v} out of range for sigma={sigma}", line=ln + 1 + off)
        rows[got] = vals
        got += 1
    if got != n:
        raise FormatError(f"expected {n} rows, found {got}", line=len(lines) or 1)
    return StringSet(n=n, d=d, sigma=sigma, data=rows)


def write_instance(inst, comments=()):
    """Canonical text form: single spaces, newline-terminated rows."""
    out = []
    for c in comments:
        out.append(f"# {c}")
    out.append(f"{inst.n} {inst.d} {inst.sigma}")
    for i in range(inst.n):
        out.append(" ".join(str(int(v)) for v in inst.data[i]))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# exhaustive discrete solvers


def _kernel_view(inst):
    """Narrowest contiguous dtype view for the scalar kernels."""
    data = inst.data
    want = dtype_for(inst.sigma)
    if data.dtype != want:
        data = data.astype(want)
    return np.ascontiguousarray(data)


def _row_blocked(kernel, data, n, threads):
    """Run a row-range kernel over [0, n), optionally across worker threads.

    Output blocks are disjoint, so the result is bit-identical for any
    thread count (the compiled kernels release the GIL).
    """
    if threads <= 1 or n < 2 * threads:
        return kernel(data, 0, n)
    from concurrent.futures import ThreadPoolExecutor

    bounds = [(i * n // threads, (i + 1) * n // threads) for i in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda b: kernel(data, b[0], b[1]), bounds))
    return np.concatenate(parts)


def naive_radii(inst, threads=1):
    """Radius r(x, X) of every string, by exhaustive pairwise counting."""
    data = _kernel_view(inst)
    return _row_blocked(kernels.hamming_rowmax, data, inst.n, threads)


def naive_remoteness(inst, threads=1):
    """Remoteness d(x, X minus x) of every string; duplicates give 0."""
    data = _kernel_view(inst)
    return _row_blocked(kernels.hamming_rowmin_excl, data, inst.n, threads)


def naive_closest(inst, threads=1):
    """argmin over x in X of max_y HD(x, y); ties to the lowest index."""
    radii = naive_radii(inst, threads=threads)
    idx = int(np.argmin(radii))
    return SolveResult(
        center_index=idx,
        center_string=inst.data[idx],
        objective=int(radii[idx]),
        algorithm="naive-closest",
    )


def naive_remotest(inst, threads=1):
    """argmax over x in X of min_{y != x} HD(x, y); ties to the lowest index."""
    if inst.n < 2:
        raise ValueError("remoteness undefined on fewer than two strings")
    rem = naive_remoteness(inst, threads=threads)
    idx = int(np.argmax(rem))
    return SolveResult(
        center_index=idx,
        center_string=inst.data[idx],
        objective=int(rem[idx]),
        algorithm="naive-remotest",
    )


# ---------------------------------------------------------------------------
# brute-force continuous solvers


def candidate_block(start, stop, d, sigma):
    """Rows start..stop-1 of the lexicographic enumeration of Sigma^d."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), d), dtype=dtype_for(sigma))
    for j in range(d):
        power = sigma ** (d - 1 - j)
        out[:, j] = (idx // power) % sigma
    return out


def _brute_continuous(inst, maximize, cap):
    total = inst.sigma**inst.d
    if total > cap:
        raise BudgetError(
            f"enumeration of sigma^d = {inst.sigma}^{inst.d} = {total} candidates "
            f"exceeds the cap of {cap}"
        )
    data = inst.data.astype(np.int32)
    best_val = None
    best_idx = None
    block = max(1, min(total, (1 << 22) // max(1, inst.n)))
    for start in range(0, total, block):
        stop = min(start + block, total)
        cand = candidate_block(start, stop, inst.d, inst.sigma)
        # (B, n) mismatch counts, scalar per-position accumulation
        acc = np.zeros((stop - start, inst.n), dtype=np.int32)
        for k in range(inst.d):
            acc += cand[:, k : k + 1] != data[:, k]
        vals = acc.min(axis=1) if maximize else acc.max(axis=1)
        pos = int(np.argmax(vals)) if maximize else int(np.argmin(vals))
        val = int(vals[pos])
        if best_val is None or (val > best_val if maximize else val < best_val):
            best_val = val
            best_idx = start + pos
    center = candidate_block(best_idx, best_idx + 1, inst.d, inst.sigma)[0]
    return best_idx, center, best_val


def brute_continuous_closest(inst, cap=DEFAULT_ENUM_CAP):
    """Lexicographically-first string of Sigma^d minimizing the radius."""
    _, center, val = _brute_continuous(inst, maximize=False, cap=cap)
    return SolveResult(
        center_index=None,
        center_string=center,
        objective=val,
        algorithm="brute-continuous-closest",
    )


def brute_continuous_remotest(inst, cap=DEFAULT_ENUM_CAP):
    """Lexicographically-first string of Sigma^d maximizing the distance to X."""
    _, center, val = _brute_continuous(inst, maximize=True, cap=cap)
    return SolveResult(
        center_index=None,
        center_string=center,
        objective=val,
        algorithm="brute-continuous-remotest",
    )
