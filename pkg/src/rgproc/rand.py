"""Deterministic random number generation shared by the python and compiled paths.

The generator is xoshiro256++ seeded through splitmix64, with rejection-sampled
bounded integers, so a (seed, call sequence) pair replays to the same draws on
any platform.  numpy's Generator is not usable here because the hot loops run
in nopython kernels; the state lives in a plain uint64[4] array that both
sides share.
"""

import numpy as np
from numba import njit

U64 = np.uint64

_SM_GAMMA = U64(0x9E3779B97F4A7C15)
_SM_MIX1 = U64(0xBF58476D1CE4E5B9)
_SM_MIX2 = U64(0x94D049BB133111EB)


@njit(cache=True, inline="always")
def splitmix64(x):
    x = (x + _SM_GAMMA) & U64(0xFFFFFFFFFFFFFFFF)
    z = x
    z = (z ^ (z >> U64(30))) * _SM_MIX1
    z = (z ^ (z >> U64(27))) * _SM_MIX2
    return x, z ^ (z >> U64(31))


@njit(cache=True, inline="always")
def hash64(x):
    # stateless splitmix64 finalizer; used for treap priorities
    z = (U64(x) + _SM_GAMMA) & U64(0xFFFFFFFFFFFFFFFF)
    z = (z ^ (z >> U64(30))) * _SM_MIX1
    z = (z ^ (z >> U64(27))) * _SM_MIX2
    return z ^ (z >> U64(31))


@njit(cache=True)
def seed_state(seed):
    """Expand a 64-bit seed into a xoshiro256++ state (all-zero is impossible)."""
    st = np.empty(4, dtype=np.uint64)
    x = U64(seed)
    for i in range(4):
        x, z = splitmix64(x)
        st[i] = z
    return st


@njit(cache=True, inline="always")
def _rotl(x, k):
    return ((x << U64(k)) | (x >> U64(64 - k))) & U64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def next_u64(st):
    result = _rotl(st[0] + st[3], 23) + st[0]
    t = st[1] << U64(17)
    st[2] ^= st[0]
    st[3] ^= st[1]
    st[1] ^= st[2]
    st[0] ^= st[3]
    st[2] ^= t
    st[3] = _rotl(st[3], 45)
    return result & U64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def randbelow(st, bound):
    # unbiased uniform on [0, bound) by rejection; threshold = 2^64 mod bound
    b = U64(bound)
    threshold = (U64(0) - b) % b
    while True:
        r = next_u64(st)
        if r >= threshold:
            return np.int64(r % b)


@njit(cache=True, inline="always")
def next_double(st):
    # 53-bit mantissa, strictly inside (0, 1) so log() is safe
    return (np.float64(next_u64(st) >> U64(11)) + 0.5) * (1.0 / 9007199254740992.0)


class RandomStream:
    """Thin stateful wrapper over the kernel-level generator.

    The state array can be handed to compiled loops and keeps advancing in
    place, so interleaving python-side and kernel-side draws stays coherent.
    """

    def __init__(self, seed: int):
        if not 0 <= int(seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")
        self.seed = int(seed)
        self.state = seed_state(U64(seed))

    def randbelow(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        return int(randbelow(self.state, bound))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.randbelow(hi - lo + 1)

    def random(self) -> float:
        return float(next_double(self.state))

    def fork(self, tag: int) -> "RandomStream":
        """Independent stream derived from (seed, tag); used for per-seed jobs."""
        return RandomStream(int(hash64(U64(self.seed ^ (tag * 0x9E3779B97F4A7C15 % 2**64)))))
