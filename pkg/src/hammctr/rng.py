"""Deterministic 64-bit PRNG used by every seeded command.

The generator is splitmix64.  State update and output scrambling:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4B5B9   mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output = z ^ (z >> 31)

Bounded draws use the multiply-shift mapping (output * bound) >> 64, which
is deterministic and bias-free enough for instance generation.  Any
implementation of these two rules reproduces the exact streams.
"""

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK64

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4B5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_below(self, bound):
        """Uniform-ish draw in [0, bound) via multiply-shift."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return (self.next_u64() * bound) >> 64

    def fill_symbols(self, count, sigma):
        """List of `count` symbols drawn from [0, sigma)."""
        return [self.next_below(sigma) for _ in range(count)]

    def sample_positions(self, count, universe):
        """Draw `count` distinct positions from range(universe), order-stable.

        Partial Fisher-Yates on an index list; deterministic for a fixed state.
        """
        if count > universe:
            raise ValueError("cannot sample more positions than exist")
        idx = list(range(universe))
        for i in range(count):
            j = i + self.next_below(universe - i)
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:count]


def derive_seed(seed, *salts):
    """Stable sub-stream seed from a master seed and integer salts."""
    g = SplitMix64(seed)
    out = g.next_u64()
    for s in salts:
        g2 = SplitMix64((out ^ (s & MASK64)) & MASK64)
        out = g2.next_u64()
    return out
