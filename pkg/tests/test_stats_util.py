import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from mwright.core import MWrightParams
from mwright.errors import DomainError, InsufficientData
from mwright.sampling import RngStream, sample_mwright
from mwright.stats_util import gof_simulated, ks_two_sample, pct_bias, pct_mad, quantile_type8


def test_type8_hand_value():
    assert quantile_type8([1, 2, 3, 4], 0.5) == 2.5
    assert quantile_type8([4, 1, 3, 2], 0.5) == 2.5


def test_type8_clamps_to_range():
    assert quantile_type8([5.0, 1.0, 3.0], 0.01) == 1.0
    assert quantile_type8([5.0, 1.0, 3.0], 0.999) == 5.0
    assert quantile_type8([2.0], 0.3) == 2.0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40),
       st.floats(0.0, 1.0))
def test_type8_against_numpy_median_unbiased(xs, p):
    ref = np.quantile(np.array(xs), p, method="median_unbiased")
    assert quantile_type8(xs, p) == pytest.approx(ref, rel=1e-12, abs=1e-9)


def test_type8_vector_and_monotone(gen):
    x = gen.standard_normal(257)
    ps = np.linspace(0, 1, 101)
    q = quantile_type8(x, ps)
    assert np.all(np.diff(q) >= 0)
    assert q[37] == quantile_type8(x, ps[37])


def test_type8_errors():
    with pytest.raises(InsufficientData):
        quantile_type8([], 0.5)
    with pytest.raises(DomainError):
        quantile_type8([1, 2], 1.5)


def test_pct_bias_and_mad_examples():
    assert pct_bias([2.1], 2) == pytest.approx(5.0)
    assert pct_bias([2, 2, 2], 2) == 0.0
    assert pct_bias([1.9, 2.0, 2.2], 2) == pytest.approx(5.0)
    assert pct_mad([1.9, 2.0, 2.2], 2) == pytest.approx(5.0)
    assert pct_mad([2, 2, 2, 2], 2) == 0.0
    assert pct_mad([2.1], 2) == pytest.approx(5.0)
    with pytest.raises(DomainError):
        pct_bias([1.0], 0.0)
    with pytest.raises(DomainError):
        pct_mad([1.0], 0.0)


def test_r_style_mad(gen):
    est = 5 + gen.standard_normal(20001)
    sd_pct = 100 / 5
    assert pct_mad(est, 5, center="median", scale=1.4826) == pytest.approx(sd_pct, rel=0.03)
    # for normal errors the R-style % MAD over % bias tends to sqrt(pi / 2)
    ratio = pct_mad(est, 5, center="median", scale=1.4826) / pct_bias(est, 5)
    assert ratio == pytest.approx(np.sqrt(np.pi / 2), rel=0.03)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.1, 10), min_size=1, max_size=20), st.floats(0.5, 5),
       st.floats(0.01, 100))
def test_percentages_scale_invariant(est, truth, c):
    est = np.array(est)
    assert pct_bias(est * c, truth * c) == pytest.approx(pct_bias(est, truth), rel=1e-9)
    assert pct_mad(est * c, truth * c) == pytest.approx(pct_mad(est, truth), rel=1e-9)


def test_ks_trivial_cases():
    r = ks_two_sample([1, 2, 3], [1, 2, 3])
    assert (r.d_stat, r.p_value) == (0.0, 1.0)
    assert ks_two_sample([1, 2, 3], [10, 11]).d_stat == 1.0
    with pytest.raises(InsufficientData):
        ks_two_sample([], [1.0])


def test_ks_statistic_matches_scipy(gen):
    a, b = gen.standard_normal(300), gen.standard_normal(217) + 0.2
    r = ks_two_sample(a, b)
    ref = stats.ks_2samp(a, b)
    assert r.d_stat == pytest.approx(ref.statistic, abs=1e-15)
    assert r.p_value == pytest.approx(ref.pvalue, abs=0.02)


def test_ks_symmetric_and_transform_invariant(gen):
    a, b = gen.exponential(size=150), gen.exponential(size=90) * 1.3
    r1, r2 = ks_two_sample(a, b), ks_two_sample(b, a)
    assert (r1.d_stat, r1.p_value) == (r2.d_stat, r2.p_value)
    r3 = ks_two_sample(np.log(a), np.log(b))
    assert r3.d_stat == r1.d_stat


def test_ks_size_under_null():
    p = MWrightParams(0.5, 1.0, 0.0, "symmetric")
    rejections = 0
    for i in range(200):
        a = sample_mwright(p, RngStream(31, i, (0,)), 10 ** 4)
        b = sample_mwright(p, RngStream(31, i, (1,)), 10 ** 4)
        rejections += ks_two_sample(a, b).p_value < 0.05
    assert 0.02 <= rejections / 200 <= 0.09


def test_gof_under_null_and_misfit():
    p = MWrightParams(0.6, 2.0, 1.0)
    data = sample_mwright(p, RngStream(41), 1000)
    assert gof_simulated(data, p, 100, RngStream(42)) > 0.1
    bad = sample_mwright(MWrightParams(0.9), RngStream(43), 1000)
    assert gof_simulated(bad, MWrightParams(0.2), 20, RngStream(44)) < 0.01


def test_gof_deterministic():
    p = MWrightParams(0.6)
    data = sample_mwright(p, RngStream(1), 200)
    assert gof_simulated(data, p, 10, RngStream(2)) == gof_simulated(data, p, 10, RngStream(2))
