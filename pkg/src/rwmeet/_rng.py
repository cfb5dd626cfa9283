"""Deterministic seed mixing and counter-based uniform streams.

Every random draw in the simulator is a pure function of
``(master_seed, run, counter)``, so results never depend on how runs are
batched or scheduled. The generator is SplitMix64: a stream keyed by ``key``
emits ``mix64(key + (counter + 1) * GOLDEN)``.
"""

import numpy as np

RNG_FAMILY = "splitmix64-counter/1"

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Child seed number ``index`` of ``seed``."""
    return mix64((seed & MASK64) ^ mix64(index + GOLDEN))


def mix64_array(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    with np.errstate(over="ignore"):
        x ^= x >> np.uint64(30)
        x *= np.uint64(_M1)
        x ^= x >> np.uint64(27)
        x *= np.uint64(_M2)
        x ^= x >> np.uint64(31)
    return x


def uniforms(keys: np.ndarray, counter: int) -> np.ndarray:
    """Uniform doubles in [0, 1), one per stream key, at position ``counter``."""
    offset = np.uint64(((counter + 1) * GOLDEN) & MASK64)
    with np.errstate(over="ignore"):
        bits = mix64_array(keys + offset)
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
