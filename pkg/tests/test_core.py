import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from mwright.core import (MWrightParams, Variant, log_domain_moments, moment, moment_summary,
                          pdf)
from mwright.errors import DomainError
from mwright.sampling import RngStream, sample_mwright

from .conftest import mc_within

EULER = 0.5772156649015329


@pytest.mark.parametrize("kwargs", [dict(alpha=0.0), dict(alpha=1.0), dict(alpha=0.5, rho=0.0),
                                    dict(alpha=0.5, rho=-1.0), dict(alpha=0.5, mu=math.inf)])
def test_params_validation(kwargs):
    with pytest.raises(DomainError):
        MWrightParams(**kwargs)


def test_variant_parsing():
    assert MWrightParams(0.5, variant="symmetric").variant is Variant.SYMMETRIC
    assert MWrightParams(0.5, variant="one_sided").variant is Variant.ONE_SIDED
    with pytest.raises(ValueError):
        Variant.parse("two-sided")


def test_boundary_height():
    p = MWrightParams(0.473, 4.390, 25.020)
    assert pdf(p, 25.020) == pytest.approx(0.1352, abs=5e-4)
    assert pdf(p, 25.0) == 0.0


def test_symmetric_half_is_gaussian():
    p = MWrightParams(0.5, 1.0, 0.0, "symmetric")
    assert pdf(p, 0.0) == pytest.approx(0.2820948, abs=1e-7)
    for rho, mu in [(1.0, 0.0), (2.5, -3.0), (0.3, 7.0)]:
        p = MWrightParams(0.5, rho, mu, "symmetric")
        xs = np.linspace(mu - 6 * rho, mu + 6 * rho, 41)
        np.testing.assert_allclose(pdf(p, xs), stats.norm.pdf(xs, mu, math.sqrt(2) * rho),
                                   rtol=1e-12, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(0.05, 0.95), rho=st.floats(0.1, 10), mu=st.floats(-50, 50),
       d=st.floats(0, 5))
def test_symmetric_even(alpha, rho, mu, d):
    p = MWrightParams(alpha, rho, mu, "symmetric")
    assert pdf(p, mu + d * rho) == pytest.approx(pdf(p, mu - d * rho), rel=1e-12, abs=1e-300)
    assert pdf(p, mu + d) == pdf(p, mu - d) or abs((mu + d) - mu) != abs((mu - d) - mu)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("variant", ["one-sided", "symmetric"])
def test_pdf_integrates_to_one(alpha, variant):
    p = MWrightParams(alpha, 2.0, 1.0, variant)
    lo = 1.0 if variant == "one-sided" else -np.inf
    total = integrate.quad(lambda x: pdf(p, x), lo, np.inf, limit=200)[0]
    if variant == "symmetric":
        total = 2 * integrate.quad(lambda x: pdf(p, x), 1.0, np.inf, limit=200)[0]
    assert abs(total - 1.0) < 1e-3


def test_moment_examples():
    assert moment(MWrightParams(0.5), 1) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-14)
    assert moment(MWrightParams(0.37, 3.0, 0, "symmetric"), 3) == 0.0
    assert moment(MWrightParams(0.37, 3.0), 0) == 1.0
    with pytest.raises(DomainError):
        moment(MWrightParams(0.5), -1)
    with pytest.raises(DomainError):
        moment(MWrightParams(0.5, variant="symmetric"), 1.5)


def test_moment_half_against_monte_carlo():
    x = sample_mwright(MWrightParams(0.5), RngStream(11), 10 ** 6)
    ok, mean, se = mc_within(x, 2 / math.sqrt(math.pi), 3)
    assert ok, (mean, se)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.85])
def test_variance_consistent_with_moments(alpha):
    p = MWrightParams(alpha, 2.0)
    var = moment(p, 2) - moment(p, 1) ** 2
    assert var == pytest.approx(moment_summary(p).variance, rel=1e-12)


def test_moment_summary_examples():
    s = moment_summary(MWrightParams(0.5))
    assert s.cv == pytest.approx(math.sqrt(math.pi / 2 - 1), rel=1e-12)
    assert s.cv == pytest.approx(0.755511, abs=1e-6)
    assert s.variance == pytest.approx(2 - 4 / math.pi, rel=1e-12)
    sym = moment_summary(MWrightParams(0.5, 1.0, 7.0, "symmetric"))
    assert (sym.mean, sym.variance) == (7.0, pytest.approx(2.0))
    assert sym.cv is None


def test_moment_summary_against_samples():
    p = MWrightParams(0.5, 1.0, 7.0, "symmetric")
    x = sample_mwright(p, RngStream(5), 10 ** 6)
    assert abs(x.mean() - 7.0) < 4 * math.sqrt(2.0 / x.size)
    # var of the sample variance for a Gaussian: 2 sigma^4 / n
    assert abs(x.var() - 2.0) < 4 * math.sqrt(2 * 4.0 / x.size)


def test_log_domain_moments_values():
    m, v, m3, m4 = log_domain_moments(0.5, 1.0)
    assert m == pytest.approx(-EULER / 2, rel=1e-14)
    assert m == pytest.approx(-0.2886078, abs=1e-7)
    assert v == pytest.approx(1.2337006, abs=1e-7)
    assert m3 == pytest.approx(-2.1035996, abs=1e-7)
    assert log_domain_moments(1.0, 1.0)[1:] == (0.0, 0.0, 0.0)
    for a in (0.01, 0.5, 0.99):
        assert 0 < log_domain_moments(a, 3.0)[1] < math.pi ** 2 / 6


@pytest.mark.parametrize("alpha", [0.4, 0.6, 0.8])
def test_log_domain_moments_against_simulation(alpha):
    rho = 3.0
    x = sample_mwright(MWrightParams(alpha, rho), RngStream(99, int(alpha * 10)), 10 ** 6)
    logs = np.log(x)
    m, v, m3, m4 = log_domain_moments(alpha, rho)
    c = logs - logs.mean()
    for sample_vals, target in [(logs, m), (c ** 2, v), (c ** 3, m3), (c ** 4, m4)]:
        ok, mean, se = mc_within(sample_vals, target, 4)
        assert ok, (target, mean, se)
