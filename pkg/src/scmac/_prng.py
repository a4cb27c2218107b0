"""Counter-based deterministic pseudo-random helpers.

Every stochastic choice in the simulator is derived from explicit 64-bit
seeds through the splitmix64 finalizer, so results are reproducible and
independent of evaluation order.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 finalization round of a 64-bit integer."""
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix(*parts: int) -> int:
    """Combine integers into one well-mixed 64-bit seed."""
    acc = 0
    for p in parts:
        acc = splitmix64(acc ^ (p & _MASK64))
    return acc


def unit_floats(seed: int, indices: np.ndarray) -> np.ndarray:
    """Per-index uniforms in [0, 1), keyed by (seed, index).

    Vectorized splitmix64 over the index array; the value at a given index
    never depends on which other indices are evaluated.
    """
    with np.errstate(over="ignore"):
        x = (np.asarray(indices, dtype=np.uint64) + np.uint64(1)) * np.uint64(_GOLDEN)
        x += np.uint64(seed & _MASK64)
        z = x
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) / float(1 << 53)
