import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import count_tables
from quadrature import chi2_sf_quadrature
from ucm import (
    EstimationConfig,
    chi2_sf,
    estimate_arbitrary,
    independence_test,
    is_uniform_channel,
    lrt_ucm,
)
from ucm.errors import DegenerateTable
from ucm.synthetic import random_channel, sample_channel

RAW = EstimationConfig(smoothing=0)


def test_chi2_sf_examples():
    assert chi2_sf(0, 1) == 1.0
    assert chi2_sf(0, 7) == 1.0
    assert chi2_sf(3.841459, 1) == pytest.approx(0.05, abs=1e-4)
    assert chi2_sf(9.487729, 4) == pytest.approx(0.05, abs=1e-4)
    assert chi2_sf(3.841459, 1) == pytest.approx(chi2_sf_quadrature(3.841459, 1), abs=1e-10)
    assert chi2_sf(9.487729, 4) == pytest.approx(chi2_sf_quadrature(9.487729, 4), abs=1e-10)
    # df = 2 has the closed form exp(-x/2)
    assert chi2_sf(5.0, 2) == pytest.approx(math.exp(-2.5), abs=1e-14)
    with pytest.raises(ValueError):
        chi2_sf(-1, 2)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 80), st.integers(1, 30))
def test_chi2_sf_against_quadrature(x, df):
    assert chi2_sf(x, df) == pytest.approx(chi2_sf_quadrature(x, df), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 100), st.floats(1e-3, 50), st.integers(1, 20))
def test_chi2_sf_decreasing(x, dx, df):
    lo, hi = chi2_sf(x + dx, df), chi2_sf(x, df)
    assert lo <= hi
    if 1e-200 < lo and hi < 1 - 1e-10:
        assert lo < hi


def test_chi2_sf_vanishes():
    for df in (1, 5, 20):
        assert chi2_sf(2000, df) < 1e-300
        assert chi2_sf(math.inf, df) == 0.0


def test_lrt_exact_fit():
    res = lrt_ucm([[8, 2], [2, 8]])
    assert res.g2 == 0.0 and res.p_value == 1.0 and res.df == 1


def test_lrt_matches_loglik_difference():
    n = [[8, 2], [3, 7]]
    res = lrt_ucm(n, config=RAW)
    _, l_arb = estimate_arbitrary(n)
    l_uc = 15 * math.log(0.75) + 5 * math.log(0.25)
    assert res.g2 == pytest.approx(2 * (l_arb - l_uc), abs=1e-12)
    assert res.p_value == pytest.approx(chi2_sf_quadrature(res.g2, 1), abs=1e-10)
    # default smoothing moves the statistic only slightly
    assert lrt_ucm(n).g2 == pytest.approx(res.g2, abs=1e-3)


def test_lrt_degenerate():
    with pytest.raises(DegenerateTable):
        lrt_ucm([[1, 2, 3]])
    with pytest.raises(DegenerateTable):
        independence_test([[1], [2]])


def test_lrt_rejects_non_uniform_channel_at_large_n():
    beta = [0.3, 0.7]
    theta = [[0.6, 0.3, 0.1], [0.2, 0.2, 0.6]]
    rejected = sum(
        lrt_ucm(sample_channel(beta, theta, 10_000, (5, t))).p_value < 0.05 for t in range(100)
    )
    assert rejected == 100


def test_independence_examples():
    res = independence_test([[10, 10], [10, 10]])
    assert res.g2 == 0.0 and res.p_value == 1.0
    res = independence_test([[20, 0], [0, 20]])
    assert res.g2 == pytest.approx(80 * math.log(2), abs=1e-12)
    assert res.g2 == pytest.approx(55.45, abs=5e-3)
    assert res.p_value < 1e-12


def test_independence_calibration():
    rng = np.random.default_rng(2024)
    row, col = [0.2, 0.5, 0.3], [0.6, 0.4]
    joint = np.outer(row, col).ravel()
    rejections = 0
    for _ in range(1000):
        counts = rng.multinomial(5000, joint).reshape(3, 2)
        rejections += independence_test(counts).p_value < 0.05
    assert 0.02 <= rejections / 1000 <= 0.10


@settings(max_examples=100, deadline=None)
@given(count_tables(min_rows=2, max_rows=4, min_cols=2, max_cols=5),
       st.sampled_from(["general", "cyclic"]))
def test_g2_nonnegative_and_zero_iff_uniform(n, kind):
    res = lrt_ucm(n, kind, RAW)
    assert res.g2 >= 0 and 0 <= res.p_value <= 1
    theta, _ = estimate_arbitrary(n)
    if is_uniform_channel(theta, kind, 1e-12):
        assert res.g2 <= 1e-9
    if res.g2 <= 1e-12 and kind == "general":
        assert is_uniform_channel(theta, kind, 1e-9)


@settings(max_examples=100, deadline=None)
@given(count_tables(min_rows=2, max_rows=4, min_cols=2, max_cols=5),
       st.randoms(use_true_random=False), st.integers(0, 4))
def test_lrt_relabeling_invariance(n, rnd, s):
    cols = list(range(n.shape[1]))
    rnd.shuffle(cols)
    assert lrt_ucm(n).g2 == pytest.approx(lrt_ucm(n[:, cols]).g2, abs=1e-9)
    rolled = np.roll(n, s, axis=1)
    assert lrt_ucm(n, "cyclic").g2 == pytest.approx(lrt_ucm(rolled, "cyclic").g2, abs=1e-9)


def test_random_channel_is_rejected():
    theta = random_channel((3, 3), 11)
    counts = sample_channel([1 / 3] * 3, theta, 20_000, 3)
    assert lrt_ucm(counts).p_value < 1e-6
