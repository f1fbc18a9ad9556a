"""Counter-based random streams.

Every random draw in the simulator is a pure function of
``(master_seed, trial_index, stream_tag, block_index)``: the 64-bit seed is the
Philox4x32-10 key and the other three form the counter.  A stream therefore
never depends on how many other streams were consumed before it, which is
what makes trial results independent of the executor count.

One block yields four 32-bit words, turned into two 53-bit uniforms on the
open interval (0, 1) and, through Box-Muller, into two standard normals.
Every draw consumes whole blocks; leftovers are discarded.
"""

from __future__ import annotations

import numpy as np

PHILOX_M0 = 0xD2511F53
PHILOX_M1 = 0xCD9E8D57
PHILOX_W0 = 0x9E3779B9
PHILOX_W1 = 0xBB67AE85
PHILOX_ROUNDS = 10

_MASK32 = np.uint64(0xFFFFFFFF)
_TWO_POW_26 = 67108864.0
_TWO_POW_53 = 9007199254740992.0

SEED_MAX = 2**64 - 1
SQRT_HALF = 0.7071067811865476


def split_seed(seed: int) -> tuple[int, int]:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"master seed must be an unsigned 64-bit integer, got {seed}")
    return seed & 0xFFFFFFFF, seed >> 32


def philox4x32(c0, c1, c2, c3, k0: int, k1: int):
    """Philox4x32-10 over broadcastable arrays of 32-bit counter words.

    Returns four ``uint64`` arrays holding the 32-bit output words.
    """
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) & _MASK32 for c in (c0, c1, c2, c3))
    c0, c1, c2, c3 = np.broadcast_arrays(c0, c1, c2, c3)
    m0 = np.uint64(PHILOX_M0)
    m1 = np.uint64(PHILOX_M1)
    shift = np.uint64(32)
    for r in range(PHILOX_ROUNDS):
        key0 = np.uint64((k0 + r * PHILOX_W0) & 0xFFFFFFFF)
        key1 = np.uint64((k1 + r * PHILOX_W1) & 0xFFFFFFFF)
        p0 = m0 * c0
        p1 = m1 * c2
        c0, c1, c2, c3 = (
            (p1 >> shift) ^ c1 ^ key0,
            p1 & _MASK32,
            (p0 >> shift) ^ c3 ^ key1,
            p0 & _MASK32,
        )
    return c0, c1, c2, c3


def words_to_uniforms(x0, x1, x2, x3):
    """Two 53-bit uniforms in (0, 1) from the four output words of a block."""
    u1 = ((x0 >> np.uint64(5)).astype(np.float64) * _TWO_POW_26
          + (x1 >> np.uint64(6)).astype(np.float64) + 0.5) / _TWO_POW_53
    u2 = ((x2 >> np.uint64(5)).astype(np.float64) * _TWO_POW_26
          + (x3 >> np.uint64(6)).astype(np.float64) + 0.5) / _TWO_POW_53
    return u1, u2


def box_muller(u1, u2):
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    return r * np.cos(theta), r * np.sin(theta)


def block_uniforms(seed: int, trials, tag: int, blocks):
    """Uniform pairs for arbitrary (trial, block) index arrays of one tag."""
    k0, k1 = split_seed(seed)
    trials = np.asarray(trials, dtype=np.uint64)
    words = philox4x32(blocks, trials & _MASK32, trials >> np.uint64(32), tag, k0, k1)
    return words_to_uniforms(*words)


def block_normals(seed: int, trials, tag: int, blocks):
    return box_muller(*block_uniforms(seed, trials, tag, blocks))


class Stream:
    """Sequential view of one ``(seed, trial, tag)`` substream."""

    def __init__(self, seed: int, trial: int, tag: int, block: int = 0):
        split_seed(seed)
        if trial < 0 or tag < 0 or block < 0:
            raise ValueError("trial, tag and block indices must be non-negative")
        self.seed = int(seed)
        self.trial = int(trial)
        self.tag = int(tag)
        self.block = int(block)

    def __repr__(self):
        return f"Stream(seed={self.seed}, trial={self.trial}, tag={self.tag}, block={self.block})"

    def copy(self) -> "Stream":
        return Stream(self.seed, self.trial, self.tag, self.block)

    def _take(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("cannot draw a negative number of blocks")
        blocks = np.arange(self.block, self.block + n, dtype=np.uint64)
        self.block += n
        return blocks

    def uniform_pairs(self, n: int):
        """``n`` blocks as two arrays of uniforms."""
        return block_uniforms(self.seed, self.trial, self.tag, self._take(n))

    def normal_pairs(self, n: int):
        return block_normals(self.seed, self.trial, self.tag, self._take(n))

    def uniform(self, n: int) -> np.ndarray:
        """``n`` uniforms on (0, 1); consumes ``ceil(n / 2)`` blocks."""
        u1, u2 = self.uniform_pairs((n + 1) // 2)
        return np.column_stack((u1, u2)).ravel()[:n]

    def normal(self, n: int) -> np.ndarray:
        z0, z1 = self.normal_pairs((n + 1) // 2)
        return np.column_stack((z0, z1)).ravel()[:n]

    def complex_normal(self, n: int) -> np.ndarray:
        """Circularly-symmetric unit-variance complex normals, one block each."""
        z0, z1 = self.normal_pairs(n)
        w = np.empty(n, dtype=np.complex128)
        w.real = z0 * SQRT_HALF
        w.imag = z1 * SQRT_HALF
        return w


def substream(master_seed: int, trial_index: int, scheme_tag: int) -> Stream:
    return Stream(master_seed, trial_index, scheme_tag)
