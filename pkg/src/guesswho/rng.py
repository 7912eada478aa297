"""Counter-based random numbers for reproducible, partition-independent trials.

Philox4x32-10 maps (counter, key) -> 4 output words with no sequential state,
so trial t of a run can be generated without generating trials 0..t-1.  Each
trial owns the substream

    key     = (seed low word, seed high word)
    counter = (block index, trial low word, trial high word, domain tag)

and consumes blocks in order; two 32-bit words make one 53-bit uniform.  The
compiled kernel implements the identical mapping, so pure and compiled runs
of the same (seed, trial) are bit-for-bit equal, and chunking trials across
workers cannot change any draw.

The reference known-answer vectors for the 10-round 4x32 variant are pinned
in the test suite.
"""

from __future__ import annotations

__all__ = ["philox4x32", "TrialStream", "DOMAIN_DISCRETE", "DOMAIN_CONTINUOUS", "DOMAIN_ESCAPE"]

_M0 = 0xD2511F53
_M1 = 0xCD9E8D57
_W0 = 0x9E3779B9  # golden-ratio Weyl increment
_W1 = 0xBB67AE85
_MASK = 0xFFFFFFFF

# stream domain tags: the three estimators never share a stream under one seed
DOMAIN_DISCRETE = 0
DOMAIN_CONTINUOUS = 1
DOMAIN_ESCAPE = 2


def philox4x32(counter: tuple[int, int, int, int], key: tuple[int, int]) -> tuple[int, int, int, int]:
    """One Philox4x32-10 block: 10 rounds of multiply-hi/lo mixing.

    Args:
        counter: four 32-bit words.
        key: two 32-bit words.

    Returns:
        Four 32-bit output words.
    """
    c0, c1, c2, c3 = counter
    k0, k1 = key
    for _ in range(10):
        prod0 = _M0 * c0
        prod1 = _M1 * c2
        c0 = ((prod1 >> 32) & _MASK) ^ c1 ^ k0
        c1 = prod1 & _MASK
        c2 = ((prod0 >> 32) & _MASK) ^ c3 ^ k1
        c3 = prod0 & _MASK
        k0 = (k0 + _W0) & _MASK
        k1 = (k1 + _W1) & _MASK
    return c0, c1, c2, c3


class TrialStream:
    """Uniform doubles for one (seed, trial, domain) substream.

    Each Philox block yields two uniforms: words (w0, w1) then (w2, w3),
    where a pair (lo, hi) becomes ((hi << 32 | lo) >> 11) * 2^-53 in [0, 1).
    """

    __slots__ = ("_k0", "_k1", "_t_lo", "_t_hi", "_domain", "_block", "_pending")

    def __init__(self, seed: int, trial: int, domain: int = DOMAIN_DISCRETE) -> None:
        if not 0 <= seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        if not 0 <= trial < 2 ** 64:
            raise ValueError(f"trial index must be a 64-bit unsigned integer, got {trial}")
        self._k0 = seed & _MASK
        self._k1 = (seed >> 32) & _MASK
        self._t_lo = trial & _MASK
        self._t_hi = (trial >> 32) & _MASK
        self._domain = domain & _MASK
        self._block = 0
        self._pending: float | None = None

    def uniform(self) -> float:
        """Next uniform double in [0, 1) with 53 random bits."""
        if self._pending is not None:
            u, self._pending = self._pending, None
            return u
        w0, w1, w2, w3 = philox4x32(
            (self._block, self._t_lo, self._t_hi, self._domain), (self._k0, self._k1)
        )
        self._block += 1
        self._pending = (((w3 << 32) | w2) >> 11) * 2.0 ** -53
        return (((w1 << 32) | w0) >> 11) * 2.0 ** -53
