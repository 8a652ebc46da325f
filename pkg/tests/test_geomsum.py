import math

import numpy as np
import pytest

from rgproc.geomsum import (
    COUPON_DRAWS,
    GEOMETRIC_SUM,
    GeomSumSpec,
    TailEstimate,
    expected_partial_collect,
    lemma1_bound,
    lemma1_tail_estimate,
    sample_many,
    simulate_partial_collect,
)
from rgproc.rand import RandomStream


def test_expected_examples():
    assert expected_partial_collect(GeomSumSpec(2, 0, 1)) == pytest.approx(3.0)
    assert expected_partial_collect(GeomSumSpec(4, 2, 2)) == pytest.approx(2.0)
    for n in (2, 5, 100):
        assert expected_partial_collect(GeomSumSpec(n, 0, 0)) == pytest.approx(1.0)


def test_expected_matches_harmonic_form():
    def harmonic(m):
        return sum(1 / i for i in range(1, m + 1))

    for n, a, b in [(10, 0, 9), (10, 3, 7), (50, 10, 48), (7, 6, 6)]:
        want = n * (harmonic(n - a) - harmonic(n - b - 1))
        assert expected_partial_collect(GeomSumSpec(n, a, b)) == pytest.approx(want)


def test_spec_validation():
    with pytest.raises(ValueError):
        GeomSumSpec(1, 0, 0)
    with pytest.raises(ValueError):
        GeomSumSpec(5, -1, 2)
    with pytest.raises(ValueError):
        GeomSumSpec(5, 3, 2)
    with pytest.raises(ValueError):
        GeomSumSpec(5, 0, 5)


def test_mean_matches_within_three_se():
    spec = GeomSumSpec(2, 0, 1)
    rng = RandomStream(101)
    x = sample_many(spec, rng, 10**5)
    se = x.std(ddof=1) / math.sqrt(len(x))
    assert abs(x.mean() - 3.0) <= 3 * se


def test_modes_agree_in_distribution():
    from scipy import stats

    rng = RandomStream(77)
    for spec in (GeomSumSpec(6, 1, 4), GeomSumSpec(12, 0, 11), GeomSumSpec(9, 4, 6)):
        a = sample_many(spec, rng, 10**4, mode=GEOMETRIC_SUM)
        b = sample_many(spec, rng, 10**4, mode=COUPON_DRAWS)
        _, p = stats.ks_2samp(a, b)
        assert p > 0.01
        lo = spec.b - spec.a + 1
        assert a.min() >= lo and b.min() >= lo


def test_single_sample_and_mode_validation():
    rng = RandomStream(1)
    spec = GeomSumSpec(5, 1, 3)
    v = simulate_partial_collect(spec, rng)
    assert isinstance(v, int) and v >= 3
    v = simulate_partial_collect(spec, rng, mode=COUPON_DRAWS)
    assert v >= 3
    with pytest.raises(ValueError):
        sample_many(spec, rng, 10, mode="exact")
    with pytest.raises(ValueError):
        sample_many(spec, rng, 0)


def test_sampling_is_deterministic_in_seed():
    spec = GeomSumSpec(30, 5, 25)
    a = sample_many(spec, RandomStream(4), 50)
    b = sample_many(spec, RandomStream(4), 50)
    assert np.array_equal(a, b)


def test_lemma1_bound():
    assert lemma1_bound(1) == pytest.approx(math.exp(-1))
    assert lemma1_bound(10**4) == pytest.approx(math.exp(-(10**3.96)), abs=0.0)
    ks = [1, 2, 5, 10, 100, 1000]
    vals = [lemma1_bound(k) for k in ks]
    assert vals == sorted(vals, reverse=True)
    with pytest.raises(ValueError):
        lemma1_bound(0)


def test_tail_impossible_event_is_exact_zero():
    rng = RandomStream(1)
    est = lemma1_tail_estimate(100, 10, 8, 1000, rng)  # s = k-2
    assert est.p_hat == 0.0 and est.ci_halfwidth == 0.0
    est = lemma1_tail_estimate(100, 10, 0, 1000, rng)
    assert est.p_hat == 0.0


def test_tail_pinned_cell_is_zero():
    rng = RandomStream(2)
    n, k = 10**4, 10**3
    s = int(n * math.log(k) / 4)
    est = lemma1_tail_estimate(n, k, s, 2000, rng)
    assert est.p_hat == 0.0
    assert lemma1_bound(k) < 1e-300


def test_tail_saturates_far_above_mean():
    rng = RandomStream(3)
    n, k = 100, 10
    s = math.ceil(10 * n * math.log(k))
    est = lemma1_tail_estimate(n, k, s, 500, rng)
    assert est.p_hat >= 1.0 - est.ci_halfwidth
    assert est.p_hat == 1.0


def test_tail_validation():
    rng = RandomStream(1)
    with pytest.raises(ValueError):
        lemma1_tail_estimate(100, 1, 50, 10, rng)
    with pytest.raises(ValueError):
        lemma1_tail_estimate(100, 100, 50, 10, rng)
    with pytest.raises(ValueError):
        lemma1_tail_estimate(100, 10, 50, 0, rng)
    with pytest.raises(ValueError):
        TailEstimate(p_hat=1.5, trials=10, ci_halfwidth=0.0)
    with pytest.raises(ValueError):
        TailEstimate(p_hat=0.5, trials=0, ci_halfwidth=0.0)


def test_tail_estimate_tracks_true_probability():
    # small case where the tail is comfortably interior: check CI behavior
    rng = RandomStream(9)
    n, k = 20, 5
    mean = expected_partial_collect(GeomSumSpec(n, n - k, n - 2))
    est = lemma1_tail_estimate(n, k, int(mean), 4000, rng)
    assert 0.2 < est.p_hat < 0.95
    assert est.ci_halfwidth > 0
