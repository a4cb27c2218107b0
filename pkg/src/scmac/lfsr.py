"""Fibonacci linear feedback shift registers and cached maximal-length sequences.

The register shifts left each step; the bit fed into position 0 is the XOR
of the tapped bits. With a primitive tap polynomial the state walks through
all 2^w - 1 nonzero values before repeating, which is what makes the
LFSR-plus-comparator stream converter exact over a full period.

Streams are generated by slicing a cached copy of the full state cycle, so
a length-L stream costs O(L) numpy work instead of L Python-level steps.
The cache is filled once per (width, taps) pair and never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConversionError

# Primitive polynomials for the shipped widths (tap positions, 1-indexed;
# position w is the register MSB).
MAXIMAL_TAPS: dict[int, tuple[int, ...]] = {
    3: (3, 2),
    4: (4, 3),
    8: (8, 6, 5, 4),
    15: (15, 14),
}


@dataclass(frozen=True)
class Lfsr:
    """Immutable LFSR state: stepping returns a new instance."""

    width: int
    taps: tuple[int, ...]
    state: int

    def __post_init__(self):
        if self.width < 2:
            raise ConversionError(f"LFSR width must be >= 2, got {self.width}")
        taps = tuple(sorted(set(int(t) for t in self.taps), reverse=True))
        object.__setattr__(self, "taps", taps)
        if not taps or any(t < 1 or t > self.width for t in taps):
            raise ConversionError(f"taps {taps} outside 1..{self.width}")
        if self.width not in taps:
            raise ConversionError("tap set must include the register width")
        if not (1 <= self.state < (1 << self.width)):
            raise ConversionError(
                f"LFSR state must be a nonzero {self.width}-bit value, got {self.state}"
            )

    @property
    def period(self) -> int:
        return cycle_length(self.width, self.taps)


def default_lfsr(width: int = 4, seed: int = 0b1000) -> Lfsr:
    """LFSR with the shipped maximal tap set for the given width."""
    if width not in MAXIMAL_TAPS:
        raise ConversionError(
            f"no shipped tap set for width {width}; available: {sorted(MAXIMAL_TAPS)}"
        )
    return Lfsr(width, MAXIMAL_TAPS[width], seed)


def _tap_mask(width: int, taps: tuple[int, ...]) -> int:
    mask = 0
    for t in taps:
        mask |= 1 << (t - 1)
    return mask


def _step(state: int, width: int, mask: int) -> int:
    fb = bin(state & mask).count("1") & 1
    return ((state << 1) | fb) & ((1 << width) - 1)


def lfsr_next(l: Lfsr) -> tuple[Lfsr, int]:
    """Advance one step; the new state is also the emitted w-bit output."""
    new = _step(l.state, l.width, _tap_mask(l.width, l.taps))
    return Lfsr(l.width, l.taps, new), new


def lfsr_outputs(l: Lfsr, count: int) -> list[int]:
    """The next `count` outputs, stepping from the given state."""
    out = []
    cur = l
    for _ in range(count):
        cur, v = lfsr_next(cur)
        out.append(v)
    return out


# (width, taps) -> (sequence of states starting at 1, phase index per state)
_SEQ_CACHE: dict[tuple[int, tuple[int, ...]], tuple[np.ndarray, np.ndarray]] = {}


def state_cycle(width: int, taps: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """The state cycle through 1 and a state->phase lookup table.

    Returns (seq, phase_of) where seq[k] is the state after k steps from
    state 1 and phase_of[s] is the k with seq[k] == s (-1 for states not on
    the cycle, which only exist for non-maximal tap sets).
    """
    taps = tuple(sorted(set(int(t) for t in taps), reverse=True))
    key = (width, taps)
    cached = _SEQ_CACHE.get(key)
    if cached is not None:
        return cached
    mask = _tap_mask(width, taps)
    seq = [1]
    s = _step(1, width, mask)
    while s != 1:
        seq.append(s)
        s = _step(s, width, mask)
    seq_arr = np.asarray(seq, dtype=np.int64)
    phase_of = np.full(1 << width, -1, dtype=np.int64)
    phase_of[seq_arr] = np.arange(len(seq), dtype=np.int64)
    seq_arr.setflags(write=False)
    phase_of.setflags(write=False)
    _SEQ_CACHE[key] = (seq_arr, phase_of)
    return seq_arr, phase_of


def cycle_length(width: int, taps: tuple[int, ...]) -> int:
    return int(state_cycle(width, taps)[0].size)


def phase_of_state(width: int, taps: tuple[int, ...], state: int) -> int:
    _, phase_of = state_cycle(width, taps)
    p = int(phase_of[state])
    if p < 0:
        raise ConversionError(f"state {state} is not on the cycle of taps {taps}")
    return p


def threshold_bits(
    width: int, taps: tuple[int, ...], phase: int, length: int, threshold: int
) -> np.ndarray:
    """Comparator stream: bit t = 1 iff the (t+1)-th output from `phase` <= threshold.

    Over one full period the outputs visit 1..2^w-1 once each, so exactly
    min(threshold, period) bits are set.
    """
    seq, _ = state_cycle(width, taps)
    period = seq.size
    idx = (phase + 1 + np.arange(length, dtype=np.int64)) % period
    return (seq[idx] <= threshold).astype(np.uint8)


def select_bits(width: int, taps: tuple[int, ...], phase: int, length: int) -> np.ndarray:
    """MUX select stream: the LSB of successive outputs from `phase`."""
    seq, _ = state_cycle(width, taps)
    period = seq.size
    idx = (phase + 1 + np.arange(length, dtype=np.int64)) % period
    return (seq[idx] & 1).astype(np.uint8)
