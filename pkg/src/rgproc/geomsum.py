"""Sums of geometric waiting times / partial coupon collection.

X(a,b) is the number of uniform-with-replacement draws from N coupons made
while holding between a and b distinct ones, i.e. the sum of independent
X_i ~ Geom((N-i)/N) for i = a..b, each supported on {1, 2, ...}.  The exact
mean is N*(H_{N-a} - H_{N-b-1}); the Monte Carlo side samples X(a,b) either
as that sum (inverse transform) or by literally drawing coupons, and
estimates the lower-tail probability that a heavy-tail bound caps.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .rand import RandomStream, next_double, randbelow

GEOMETRIC_SUM = "geometric-sum"
COUPON_DRAWS = "coupon-draws"


@dataclass(frozen=True)
class GeomSumSpec:
    N: int
    a: int
    b: int

    def __post_init__(self):
        # N=1 is rejected: nothing to collect beyond the first draw
        if self.N < 2:
            raise ValueError(f"N must be >= 2, got {self.N}")
        if not 0 <= self.a <= self.b < self.N:
            raise ValueError(
                f"need 0 <= a <= b < N, got a={self.a}, b={self.b}, N={self.N}")


@dataclass(frozen=True)
class TailEstimate:
    p_hat: float
    trials: int
    ci_halfwidth: float  # 95% normal approximation

    def __post_init__(self):
        if not 0 <= self.p_hat <= 1:
            raise ValueError("p_hat out of [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.ci_halfwidth < 0:
            raise ValueError("negative ci_halfwidth")


def expected_partial_collect(spec: GeomSumSpec) -> float:
    """N*(H_{N-a} - H_{N-b-1}) by direct summation: sum of N/(N-i), i=a..b."""
    n = spec.N
    return sum(n / (n - i) for i in range(spec.a, spec.b + 1))


@njit(cache=True)
def _geom_sum_fill(rstate, n, a, b, out):
    for t in range(out.shape[0]):
        total = np.int64(0)
        for i in range(a, b + 1):
            if i == 0:
                # Geom(1): one draw, surely fresh; consumes no randomness
                total += 1
                continue
            p = (n - i) / n
            u = next_double(rstate)
            total += np.int64(math.ceil(math.log(u) / math.log1p(-p)))
        out[t] = total


@njit(cache=True)
def _coupon_fill(rstate, n, a, b, out):
    held = np.zeros(n + 1, dtype=np.uint8)
    for t in range(out.shape[0]):
        for j in range(n + 1):
            held[j] = 0
        for j in range(1, a + 1):
            held[j] = 1
        have = a
        draws = np.int64(0)
        while have <= b:
            c = 1 + randbelow(rstate, n)
            draws += 1
            if held[c] == 0:
                held[c] = 1
                have += 1
        out[t] = draws


def simulate_partial_collect(spec: GeomSumSpec, rng: RandomStream,
                             mode: str = GEOMETRIC_SUM) -> int:
    """One sample of X(a,b) under the chosen sampling mode."""
    return int(sample_many(spec, rng, 1, mode=mode)[0])


def sample_many(spec: GeomSumSpec, rng: RandomStream, trials: int,
                mode: str = GEOMETRIC_SUM) -> np.ndarray:
    """trials independent samples of X(a,b); both modes share the stream."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    out = np.empty(trials, dtype=np.int64)
    if mode == GEOMETRIC_SUM:
        _geom_sum_fill(rng.state, spec.N, spec.a, spec.b, out)
    elif mode == COUPON_DRAWS:
        _coupon_fill(rng.state, spec.N, spec.a, spec.b, out)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return out


def lemma1_bound(k) -> float:
    """exp(-k^0.99), defined for k >= 1; decreasing in k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return math.exp(-float(k) ** 0.99)


def lemma1_tail_estimate(N: int, k: int, s: int, trials: int,
                         rng: RandomStream) -> TailEstimate:
    """Monte Carlo Pr[X(N-k, N-2) <= s] over the given trials.

    Collecting the k-1 coupons from N-k to N-2 held takes at least k-1 draws,
    so s < k-1 gives an exactly zero estimate without simulating.
    """
    if not 2 <= k < N:
        raise ValueError(f"need 2 <= k < N, got k={k}, N={N}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    s = int(s)
    if s < k - 1:
        return TailEstimate(p_hat=0.0, trials=trials, ci_halfwidth=0.0)
    spec = GeomSumSpec(N=N, a=N - k, b=N - 2)
    x = sample_many(spec, rng, trials, mode=GEOMETRIC_SUM)
    hits = int(np.count_nonzero(x <= s))
    p = hits / trials
    ci = 1.96 * math.sqrt(p * (1 - p) / trials)
    return TailEstimate(p_hat=p, trials=trials, ci_halfwidth=ci)
