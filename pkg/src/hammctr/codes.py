"""Constant-weight binary code families for the discrete equivalence gadget.

Contract: n codewords of length L (a multiple of 4), every word of Hamming
weight exactly L/4, pairwise distance at least ceil(0.37*L), and
L <= C*ceil(log2 n) for the configured constant C (default 40).

Construction layers:
  * n <= 4: disjoint weight-2 supports at L = 8 (distance 4).
  * n <= 256: evaluations of affine maps u.x + b over GF(4)^m expanded to
    characteristic vectors, L = 4^(m+1).  Weight is exactly L/4 and distinct
    words agree on exactly 4^(m-1) coordinates (an affine hyperplane), so the
    binary distance is exactly 0.375*L (or 2*L/4 = L/2 when only the constant
    differs), which clears the 0.37 floor with the ceiling accounted for.
  * beyond that: a seeded greedy rejection search.  At C = 40 the greedy has
    no room: random weight-L/4 pairs meet the floor with probability ~0.6, so
    the accept rate decays geometrically and the search provably stalls near
    50 words; there is no known family (and by counting, essentially no
    family) of this weight/distance profile at L = 40*log2(n) for large n.
    The search raises CodeSearchError reporting what it achieved.
"""

from dataclasses import dataclass

import numpy as np

from .core import StringSet
from .errors import CodeSearchError
from .rng import SplitMix64, derive_seed

DEFAULT_C = 40

# GF(4) multiplication; addition is XOR
_MUL4 = np.array(
    [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]],
    dtype=np.uint8,
)


def distance_floor(length):
    """ceil(0.37 * length), exactly, in integer arithmetic."""
    return (37 * length + 99) // 100


def _log2_ceil(n):
    return max(1, (max(n, 2) - 1).bit_length())


@dataclass(frozen=True)
class ConstantWeightCode:
    n: int
    length: int
    weight: int
    words: np.ndarray  # (n, length) uint8
    min_distance: int

    def to_instance(self):
        return StringSet(n=self.n, d=self.length, sigma=2, data=self.words)


@dataclass(frozen=True)
class CodeReport:
    ok: bool
    n: int
    length: int
    weight: int
    min_distance: int
    weight_histogram: dict
    violations: tuple


def _pairwise_min_distance(words):
    """Exact minimum pairwise distance and one attaining pair."""
    n = len(words)
    if n < 2:
        return len(words[0]) if n else 0, None
    packed = np.packbits(words, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    packed = np.ascontiguousarray(packed).view(np.uint64)
    best = None
    pair = None
    for i in range(n - 1):
        x = np.bitwise_xor(packed[i + 1 :], packed[i])
        dist = np.bitwise_count(x).sum(axis=1)
        j = int(np.argmin(dist))
        if best is None or int(dist[j]) < best:
            best = int(dist[j])
            pair = (i, i + 1 + j)
    return best, pair


def _affine_words(n, m):
    """First n affine-map evaluations over GF(4)^m, expanded to binary."""
    npoints = 4**m
    length = 4 * npoints
    pts = np.empty((npoints, m), dtype=np.uint8)
    for j in range(m):
        pts[:, j] = (np.arange(npoints) // (4**j)) % 4
    words = np.zeros((n, length), dtype=np.uint8)
    for t in range(n):
        b = t % 4
        rest = t // 4
        vals = np.full(npoints, b, dtype=np.uint8)
        for j in range(m):
            uj = (rest // (4**j)) % 4
            vals ^= _MUL4[uj, pts[:, j]]
        words[t, np.arange(npoints) * 4 + vals] = 1
    return words


def _greedy_words(n, length, floor, seed, max_trials):
    weight = length // 4
    rng = SplitMix64(seed)
    accepted = []
    packed_rows = []
    best_reject = None
    trials = 0
    while len(accepted) < n and trials < max_trials:
        trials += 1
        support = rng.sample_positions(weight, length)
        word = np.zeros(length, dtype=np.uint8)
        word[support] = 1
        packed = np.packbits(word, bitorder="little")
        pad = (-len(packed)) % 8
        if pad:
            packed = np.pad(packed, (0, pad))
        packed = packed.view(np.uint64)
        ok = True
        for prev in packed_rows:
            dist = int(np.bitwise_count(np.bitwise_xor(packed, prev)).sum())
            if dist < floor:
                ok = False
                if best_reject is None or dist < best_reject:
                    best_reject = dist
                break
        if ok:
            accepted.append(word)
            packed_rows.append(packed)
    if len(accepted) < n:
        raise CodeSearchError(
            f"greedy search stalled at {len(accepted)} of {n} words "
            f"(length {length}, floor {floor}, {trials} trials); "
            f"closest rejected distance {best_reject}",
            achieved_words=len(accepted),
            achieved_distance=best_reject,
        )
    return np.array(accepted, dtype=np.uint8)


def build_code(n, c=DEFAULT_C, max_trials_per_word=200):
    """Deterministic constant-weight code with the two family invariants.

    Raises CodeSearchError when no construction reaches n words within the
    length cap c*ceil(log2 n) -- see the module docstring for why that is
    unavoidable at the default cap once n is large.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    cap = c * _log2_ceil(n)
    if n <= 4 and cap >= 8:
        length = 8
        words = np.zeros((n, length), dtype=np.uint8)
        for i in range(n):
            words[i, 2 * i] = 1
            words[i, 2 * i + 1] = 1
        mind, _ = _pairwise_min_distance(words)
        if n == 1:
            mind = length
        return ConstantWeightCode(n=n, length=length, weight=2, words=words, min_distance=mind)
    m = 1
    while 4 ** (m + 1) < n:
        m += 1
    length = 4 ** (m + 1)
    if length <= cap:
        words = _affine_words(n, m)
        mind, _ = _pairwise_min_distance(words)
        return ConstantWeightCode(
            n=n, length=length, weight=length // 4, words=words, min_distance=mind
        )
    # affine family does not fit the cap: fall back to the seeded greedy
    length = (cap // 4) * 4
    if length < 8:
        raise CodeSearchError(
            f"length cap {cap} leaves no room for a weight-L/4 code", achieved_words=0
        )
    floor = distance_floor(length)
    words = _greedy_words(
        n,
        length,
        floor,
        seed=derive_seed(0x636F6465, n),
        max_trials=min(max_trials_per_word * n, 200_000),
    )
    mind, _ = _pairwise_min_distance(words)
    return ConstantWeightCode(n=n, length=length, weight=length // 4, words=words, min_distance=mind)


def verify_code(code, c=DEFAULT_C):
    """Exhaustive check of both family invariants plus the length cap.

    Violations are reported in the returned CodeReport, never raised.
    """
    violations = []
    weights = code.words.sum(axis=1)
    histogram = {}
    for w in weights:
        histogram[int(w)] = histogram.get(int(w), 0) + 1
    want = code.length // 4
    if code.length % 4 != 0:
        violations.append(f"length {code.length} is not a multiple of 4")
    bad = np.nonzero(weights != want)[0]
    if len(bad):
        violations.append(f"word {int(bad[0])} has weight {int(weights[bad[0]])}, expected {want}")
    floor = distance_floor(code.length)
    mind, pair = _pairwise_min_distance(code.words)
    if code.n == 1:
        mind = code.length
    if code.n > 1 and mind < floor:
        violations.append(f"pair {pair} at distance {mind} below the floor {floor}")
    cap = c * _log2_ceil(code.n)
    if code.length > cap:
        violations.append(f"length {code.length} exceeds the cap {cap}")
    return CodeReport(
        ok=not violations,
        n=code.n,
        length=code.length,
        weight=want,
        min_distance=mind,
        weight_histogram=histogram,
        violations=tuple(violations),
    )
