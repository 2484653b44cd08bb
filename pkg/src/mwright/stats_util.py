"""Order statistics, simulation summaries and the two-sample KS test."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import MWrightParams
from .errors import DomainError, InsufficientData
from .sampling import RngLike, RngStream, as_generator, sample_mwright
from .specfun import kolmogorov_tail

__all__ = [
    "KsResult",
    "quantile_type8",
    "median",
    "pct_bias",
    "pct_mad",
    "ks_two_sample",
    "gof_simulated",
]


def _as_sample(data) -> np.ndarray:
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise InsufficientData("empty sample")
    return x


def quantile_type8(data, p):
    """Median-unbiased sample quantile (Hyndman and Fan type 8).

    Plotting position h = (n + 1/3) p + 1/3 on 1-based order statistics,
    linear interpolation between floor(h) and floor(h) + 1, clamped to the
    sample range.  Only the two needed order statistics are selected, so a
    scalar ``p`` on a large sample costs O(n).

    Parameters
    ----------
    data : array_like
        Sample; flattened.
    p : float or array_like
        Probabilities in [0, 1].

    Returns
    -------
    float or ndarray
        Same shape as ``p``.
    """
    x = _as_sample(data)
    n = x.size
    ps = np.asarray(p, dtype=float)
    if np.any((ps < 0) | (ps > 1)) or np.any(np.isnan(ps)):
        raise DomainError("probabilities must lie in [0, 1]")
    h = (n + 1.0 / 3.0) * ps + 1.0 / 3.0
    j = np.floor(h)
    g = h - j
    lo = np.clip(j, 1, n).astype(np.intp) - 1
    hi = np.clip(j + 1, 1, n).astype(np.intp) - 1
    g = np.where(j < 1, 0.0, np.where(j >= n, 0.0, g))
    if ps.ndim == 0:
        kth = np.unique([lo.item(), hi.item()])
        part = np.partition(x, kth)
        xl, xh = part[lo.item()], part[hi.item()]
        return float(xl + g.item() * (xh - xl))
    s = np.sort(x)
    return s[lo] + g * (s[hi] - s[lo])


def median(data) -> float:
    return float(np.median(_as_sample(data)))


def _check_truth(truth: float) -> float:
    truth = float(truth)
    if truth == 0 or not math.isfinite(truth):
        raise DomainError("percentage errors need a finite non-zero truth")
    return truth


def pct_bias(estimates, truth: float) -> float:
    """Mean absolute percentage error 100 |est - truth| / |truth|."""
    truth = _check_truth(truth)
    est = _as_sample(estimates)
    return float(np.mean(100.0 * np.abs(est - truth) / abs(truth)))


def pct_mad(estimates, truth: float, center: str = "truth", scale: float = 1.0) -> float:
    """Median absolute deviation, in percent of the true value.

    By default deviations are taken from the true value, unscaled.
    ``center="median"`` with ``scale=1.4826`` gives R's ``mad()`` instead.
    """
    truth = _check_truth(truth)
    est = _as_sample(estimates)
    if center == "truth":
        ref = truth
    elif center == "median":
        ref = float(np.median(est))
    else:
        raise ValueError(f"center must be 'truth' or 'median', got {center!r}")
    return float(100.0 * scale * np.median(np.abs(est - ref)) / abs(truth))


@dataclass(frozen=True)
class KsResult:
    d_stat: float
    p_value: float
    n1: int
    n2: int


def ks_two_sample(a, b) -> KsResult:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.

    The statistic is scaled by sqrt(e) + 0.12 + 0.11/sqrt(e), e = n1 n2/(n1 + n2),
    before the Kolmogorov tail is applied.
    """
    x = np.sort(_as_sample(a))
    y = np.sort(_as_sample(b))
    n1, n2 = x.size, y.size
    pooled = np.concatenate([x, y])
    fx = np.searchsorted(x, pooled, side="right") / n1
    fy = np.searchsorted(y, pooled, side="right") / n2
    d = float(np.max(np.abs(fx - fy)))
    en = math.sqrt(n1 * n2 / (n1 + n2))
    p = kolmogorov_tail((en + 0.12 + 0.11 / en) * d)
    return KsResult(d_stat=d, p_value=p, n1=n1, n2=n2)


def gof_simulated(data, fitted: MWrightParams, sims: int = 100,
                  rng: RngLike = None) -> float:
    """Average KS p-value of the data against ``sims`` same-size fitted samples.

    With an :class:`RngStream`, simulation ``i`` uses ``rng.substream(i)``.
    """
    x = _as_sample(data)
    if sims < 1:
        raise DomainError("sims must be >= 1")
    if isinstance(rng, RngStream):
        streams = [rng.substream(i) for i in range(sims)]
    else:
        gen = as_generator(rng)
        streams = [gen] * sims
    pvals = [ks_two_sample(x, sample_mwright(fitted, s, x.size)).p_value for s in streams]
    return float(np.mean(pvals))
