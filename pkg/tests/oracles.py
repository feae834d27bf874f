"""Independent reference implementations used as test oracles.

Deliberately written with plain Python loops and itertools only -- no
imports from the package under test -- so every comparison is a genuine
dual-route check.
"""

import itertools


def hd(x, y):
    assert len(x) == len(y)
    return sum(1 for a, b in zip(x, y) if a != b)


def radius(rows, i):
    return max(hd(rows[i], r) for r in rows)


def remoteness(rows, i):
    return min(hd(rows[i], rows[j]) for j in range(len(rows)) if j != i)


def closest(rows):
    best = min(range(len(rows)), key=lambda i: (radius(rows, i), i))
    return best, radius(rows, best)


def remotest(rows):
    best = max(range(len(rows)), key=lambda i: (remoteness(rows, i), -i))
    return best, remoteness(rows, best)


def all_pairs(rows):
    n = len(rows)
    return [[hd(rows[i], rows[j]) for j in range(n)] for i in range(n)]


def continuous_closest(rows, sigma):
    d = len(rows[0])
    best = None
    for cand in itertools.product(range(sigma), repeat=d):
        r = max(hd(cand, row) for row in rows)
        if best is None or r < best[1]:
            best = (cand, r)
    return best


def continuous_remotest(rows, sigma):
    d = len(rows[0])
    best = None
    for cand in itertools.product(range(sigma), repeat=d):
        r = min(hd(cand, row) for row in rows)
        if best is None or r > best[1]:
            best = (cand, r)
    return best


def random_rows(rng, n, d, sigma):
    return [[int(rng.integers(0, sigma)) for _ in range(d)] for _ in range(n)]
