import numpy as np
import pytest

from mwright.sampling import RngStream

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def stream():
    return RngStream(seed=20240601, stream_id=0)


@pytest.fixture
def gen():
    return np.random.default_rng(12345)


def mc_within(samples, target, k):
    """|mean - target| < k standard errors."""
    samples = np.asarray(samples, dtype=float)
    se = samples.std(ddof=1) / np.sqrt(samples.size)
    return abs(samples.mean() - target) < k * se, samples.mean(), se
