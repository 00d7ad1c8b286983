"""
Counter-based measurement noise.

Draws come from numpy's Philox-4x64 bit generator. The key is derived from
the scenario seed, and the 256-bit counter starts at (0, instant, 0, 0), so
the i-th 64-bit output of that stream is the variate of node i at that
instant. A draw is therefore a pure function of (seed, node, instant): it
does not depend on how many other draws were made before it, in which
order, or in which process.
"""

from functools import lru_cache

import numpy as np

# Domain-separation words so scenario draws and noise draws never share a stream.
NOISE_STREAM = 0x6E6F697365
SCENARIO_STREAM = 0x7363656E65

_DOUBLE_SCALE = 2.0**-53


@lru_cache(maxsize=1024)
def noise_key(seed: int) -> np.ndarray:
    """128-bit Philox key for a scenario seed."""
    key = np.random.SeedSequence([seed, NOISE_STREAM]).generate_state(2, np.uint64)
    key.flags.writeable = False
    return key


def uniform_draws(seed: int, instant: int, count: int) -> np.ndarray:
    """Uniform [0, 1) variates for nodes 0 .. count-1 at `instant`."""
    bit_generator = np.random.Philox(key=noise_key(seed), counter=[0, instant, 0, 0])
    raw = bit_generator.random_raw(count)
    return (raw >> np.uint64(11)).astype(float) * _DOUBLE_SCALE


def symmetric_noise(seed: int, instant: int, bounds: np.ndarray) -> np.ndarray:
    """w_i uniform on [-bounds_i, bounds_i], one per node."""
    u = uniform_draws(seed, instant, bounds.shape[0])
    return bounds * (2.0 * u - 1.0)
