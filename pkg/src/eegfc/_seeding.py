"""Deterministic seed streams.

All randomness in the package flows from explicit integer seeds. Child seeds
are drawn from a splitmix64 stream so that a task's seed depends only on its
parent seed and its index, never on scheduling order.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state):
    """Advance a splitmix64 state; return ``(new_state, output)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def child_seeds(seed, n):
    """First ``n`` outputs of the splitmix64 stream started at ``seed``."""
    state = int(seed) & MASK64
    out = []
    for _ in range(n):
        state, z = splitmix64(state)
        out.append(z)
    return out


def child_seed(seed, index):
    """The ``index``-th (0-based) output of the stream started at ``seed``."""
    return child_seeds(seed, index + 1)[index]
