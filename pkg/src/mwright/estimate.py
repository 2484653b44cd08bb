"""Closed-form estimation and interval procedures for M-Wright samples.

The fractional and scale parameters come from the first two sample moments of
log|X - mu|; the location is the sample minimum (one-sided) or the sample mean
or median (symmetric).  Intervals are delta-method (alpha, rho), order-statistic
(one-sided mu) and CLT based (symmetric mu), with percentile bootstrap
comparators.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Optional

import numpy as np
from scipy import optimize

from .core import MWrightParams, Variant
from .errors import DomainError, InsufficientData, ZeroObservation
from .sampling import RngLike, RngStream, as_generator, sample_standard
from .specfun import EULER_GAMMA, ZETA3, mwright_cdf
from .stats_util import quantile_type8

__all__ = [
    "ALPHA_EPS",
    "ARE_CUTOFF",
    "LogMomentStats",
    "CovMatrix2",
    "CIMethod",
    "ConfidenceInterval",
    "LocationEstimator",
    "FitResult",
    "log_stats",
    "estimate_alpha_rho",
    "asymptotic_cov",
    "z_quantile",
    "ci_alpha_rho",
    "estimate_mu_onesided",
    "mc_quantile_m",
    "exact_quantile_m",
    "ci_mu_onesided",
    "are_mean_median",
    "are_root",
    "estimate_mu_symmetric",
    "ci_mu_symmetric",
    "fit",
    "estimate_rows",
    "bootstrap_estimates",
    "bootstrap_percentile_ci",
]

ALPHA_EPS = 1e-6
ARE_CUTOFF = 0.39106
_PI2 = math.pi ** 2
_MIN_FIT_SIZE = 10


@dataclass(frozen=True)
class LogMomentStats:
    """Sample mean and divide-by-n variance of log|x|."""

    n: int
    mean_xp: float
    var_xp: float
    dropped: int = 0


@dataclass(frozen=True)
class CovMatrix2:
    """Asymptotic covariance of sqrt(n) (alpha_hat, rho_hat)."""

    s_aa: float
    s_ar: float
    s_rr: float

    @property
    def corr(self) -> float:
        denom = math.sqrt(self.s_aa * self.s_rr)
        if denom == 0:
            return math.nan
        return max(-1.0, min(1.0, self.s_ar / denom))

    def as_array(self) -> np.ndarray:
        return np.array([[self.s_aa, self.s_ar], [self.s_ar, self.s_rr]])


class CIMethod(str, enum.Enum):
    DELTA_METHOD = "delta-method"
    ORDER_STATISTIC = "order-statistic"
    MEAN_CLT = "mean-clt"
    MEDIAN_CLT = "median-clt"
    BOOTSTRAP_PERCENTILE = "bootstrap-percentile"


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    method: CIMethod

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise DomainError(f"confidence level must lie in (0, 1), got {self.level}")
        if self.lower > self.upper:
            raise DomainError(f"interval bounds reversed: {self.lower} > {self.upper}")

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def as_list(self) -> list:
        return [self.lower, self.upper]


class LocationEstimator(str, enum.Enum):
    MIN = "min"
    MEAN = "mean"
    MEDIAN = "median"
    KNOWN = "known"


@dataclass
class FitResult:
    params: MWrightParams
    ci_alpha: ConfidenceInterval
    ci_rho: ConfidenceInterval
    ci_mu: Optional[ConfidenceInterval]
    cov: CovMatrix2
    corr_alpha_rho: float
    location_estimator_used: LocationEstimator
    n: int
    n_used: int
    diagnostics: list = field(default_factory=list)

    def to_dict(self, seed=None) -> dict:
        return {
            "params": self.params.as_dict(),
            "ci": {
                "alpha": self.ci_alpha.as_list(),
                "rho": self.ci_rho.as_list(),
                "mu": self.ci_mu.as_list() if self.ci_mu is not None else None,
            },
            "level": self.ci_alpha.level,
            "corr_alpha_rho": self.corr_alpha_rho,
            "location_estimator": self.location_estimator_used.value,
            "n": self.n,
            "n_used": self.n_used,
            "diagnostics": list(self.diagnostics),
            "seed": seed,
        }


def log_stats(data, exclude_nonpositive: bool = False) -> LogMomentStats:
    """Log-moment statistics of ``data``.

    With ``exclude_nonpositive`` values <= 0 are dropped (and counted in
    ``dropped``); otherwise log|x| is used and a zero raises
    :class:`ZeroObservation`.
    """
    x = np.asarray(data, dtype=float).ravel()
    dropped = 0
    if exclude_nonpositive:
        keep = x > 0
        dropped = int(x.size - keep.sum())
        x = x[keep]
    elif np.any(x == 0):
        raise ZeroObservation("zero observation cannot be log-transformed")
    if x.size < 2:
        raise InsufficientData(f"need at least 2 usable observations, got {x.size}")
    logs = np.log(np.abs(x))
    mean = float(np.mean(logs))
    var = float(np.mean((logs - mean) ** 2))
    return LogMomentStats(n=int(x.size), mean_xp=mean, var_xp=var, dropped=dropped)


def _alpha_from_var(var):
    """sqrt(1 - 6 var / pi^2), clamped into [eps, 1 - eps]."""
    raw = np.sqrt(np.clip(1.0 - 6.0 * np.asarray(var, dtype=float) / _PI2, 0.0, None))
    return np.clip(raw, ALPHA_EPS, 1.0 - ALPHA_EPS), raw


def estimate_alpha_rho(s: LogMomentStats) -> tuple[float, float, bool]:
    """Invert the log-moment equations: returns (alpha_hat, rho_hat, clamped)."""
    alpha_arr, raw = _alpha_from_var(s.var_xp)
    alpha = float(alpha_arr)
    clamped = (s.var_xp >= _PI2 / 6.0) or (s.var_xp <= 0.0) or alpha != float(raw)
    rho = math.exp(s.mean_xp + EULER_GAMMA * (1.0 - alpha))
    return alpha, rho, bool(clamped)


def asymptotic_cov(alpha_hat: float, rho_hat: float, published: bool = False) -> CovMatrix2:
    """Delta-method covariance of (alpha_hat, rho_hat).

    ``published=True`` evaluates the cross term in its widely quoted form,
    where the zeta(3) part lacks the factor rho.  That form is not
    scale-equivariant and disagrees with simulation.  It is kept only to
    reproduce correlations computed with it.
    """
    a, r = float(alpha_hat), float(rho_hat)
    if not 0.0 < a <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {a}")
    if not r > 0.0:
        raise DomainError(f"rho must be positive, got {r}")
    g, z3, pi2 = EULER_GAMMA, ZETA3, _PI2
    s_aa = (11.0 - a ** 4) / (10.0 * a * a) - 1.0
    zeta_part = 60.0 * a * (a ** 3 - 1.0) * z3 / pi2
    if not published:
        zeta_part *= r
    s_ar = (r * (10.0 * a * a - 11.0 + a ** 4) * g - zeta_part) / (10.0 * a * a)
    s_rr = r * r * (360.0 * a * (a ** 3 - 1.0) * g * z3
                    - (a * a - 1.0) * pi2 * (3.0 * (11.0 + a * a) * g * g + 5.0 * a * a * pi2)
                    ) / (30.0 * a * a * pi2)
    return CovMatrix2(s_aa=max(s_aa, 0.0), s_ar=s_ar, s_rr=max(s_rr, 0.0))


def z_quantile(level: float) -> float:
    """Two-sided standard normal critical value for confidence ``level``."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    return NormalDist().inv_cdf(0.5 + level / 2.0)


def ci_alpha_rho(alpha_hat: float, rho_hat: float, n: int, level: float = 0.95,
                 cov: Optional[CovMatrix2] = None
                 ) -> tuple[ConfidenceInterval, ConfidenceInterval]:
    if n < 2:
        raise InsufficientData(f"need n >= 2, got {n}")
    if cov is None:
        cov = asymptotic_cov(alpha_hat, rho_hat)
    z = z_quantile(level)
    ha = z * math.sqrt(cov.s_aa / n)
    hr = z * math.sqrt(cov.s_rr / n)
    ci_a = ConfidenceInterval(max(alpha_hat - ha, 0.0), min(alpha_hat + ha, 1.0),
                              level, CIMethod.DELTA_METHOD)
    ci_r = ConfidenceInterval(max(rho_hat - hr, 0.0), rho_hat + hr, level,
                              CIMethod.DELTA_METHOD)
    return ci_a, ci_r


def estimate_mu_onesided(data) -> float:
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise InsufficientData("empty sample")
    return float(np.min(x))


def _check_prob(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p}")
    return p


def mc_quantile_m(alpha: float, p: float, rng: RngLike = None, m: int = 10 ** 6) -> float:
    """Type-8 quantile of ``m`` simulated standard one-sided variates."""
    p = _check_prob(p)
    draws = sample_standard(alpha, rng, int(m))
    return quantile_type8(draws, p)


def exact_quantile_m(alpha: float, p: float) -> float:
    """Quantile of the standard one-sided law by inverting its numerical CDF."""
    p = _check_prob(p)
    lo, hi = 1e-3, 1.0
    while mwright_cdf(lo, alpha) > p:
        lo /= 10.0
        if lo < 1e-300:
            return 0.0
    while mwright_cdf(hi, alpha) < p:
        hi *= 2.0
    return optimize.brentq(lambda x: mwright_cdf(x, alpha) - p, lo, hi, xtol=1e-14,
                           rtol=1e-12)


def ci_mu_onesided(mu_hat: float, rho_hat: float, alpha_hat: float, n: int,
                   level: float = 0.95, rng: RngLike = None, m: int = 10 ** 6,
                   quantile: str = "monte-carlo") -> ConfidenceInterval:
    """Order-statistic interval (mu_hat - q rho_hat, mu_hat) for the shift.

    q is the (1 - nu^(1/n)) quantile of the standard law at ``alpha_hat``,
    nu = 1 - level, computed from ``m`` simulated variates or, with
    ``quantile="exact"``, by numerical CDF inversion.
    """
    if n < 1:
        raise InsufficientData("need n >= 1")
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    p = -math.expm1(math.log1p(-level) / n)
    if quantile == "monte-carlo":
        q = mc_quantile_m(alpha_hat, p, rng, m)
    elif quantile == "exact":
        q = exact_quantile_m(alpha_hat, p)
    else:
        raise ValueError(f"unknown quantile method {quantile!r}")
    return ConfidenceInterval(mu_hat - q * rho_hat, mu_hat, level, CIMethod.ORDER_STATISTIC)


def are_mean_median(alpha: float) -> float:
    """Asymptotic variance of the sample mean over that of the sample median.

    Values above one favour the median.
    """
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {a}")
    return 1.0 / (a * math.gamma(2.0 * a) * math.gamma(1.0 - a) ** 2)


def are_root(lo: float = 0.2, hi: float = 0.6, tol: float = 1e-10) -> float:
    """Bisection for the alpha at which mean and median are equally efficient."""
    f = lambda a: a * math.gamma(2.0 * a) * math.gamma(1.0 - a) ** 2 - 1.0
    f_lo = f(lo)
    if f_lo * f(hi) > 0:
        raise DomainError("bracket does not contain a root")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid * f_lo <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def estimate_mu_symmetric(data, alpha_hint: Optional[float] = None
                          ) -> tuple[float, LocationEstimator]:
    """Location of a symmetric sample by the mean/median efficiency rule.

    Without a hint, alpha is first estimated about the median; the mean is
    used instead when that estimate exceeds :data:`ARE_CUTOFF`.
    """
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 2:
        raise InsufficientData(f"need at least 2 observations, got {x.size}")
    med = float(np.median(x))
    if alpha_hint is None:
        dev = np.abs(x - med)
        if np.count_nonzero(dev) < 2:
            return med, LocationEstimator.MEDIAN
        alpha_hint, _, _ = estimate_alpha_rho(log_stats(dev, exclude_nonpositive=True))
    if alpha_hint > ARE_CUTOFF:
        return float(np.mean(x)), LocationEstimator.MEAN
    return med, LocationEstimator.MEDIAN


def ci_mu_symmetric(mu_hat: float, alpha_hat: float, rho_hat: float, n: int,
                    level: float = 0.95, which=LocationEstimator.MEAN) -> ConfidenceInterval:
    which = LocationEstimator(which)
    z = z_quantile(level)
    if which is LocationEstimator.MEAN:
        half = z * rho_hat / math.sqrt(alpha_hat * n * math.gamma(2.0 * alpha_hat))
        method = CIMethod.MEAN_CLT
    elif which is LocationEstimator.MEDIAN:
        half = z * rho_hat * math.gamma(1.0 - alpha_hat) / math.sqrt(n)
        method = CIMethod.MEDIAN_CLT
    else:
        raise DomainError(f"no symmetric interval for estimator {which.value}")
    return ConfidenceInterval(mu_hat - half, mu_hat + half, level, method)


def _as_stream(rng: RngLike):
    return rng if isinstance(rng, (RngStream, np.random.Generator)) else as_generator(rng)


def fit(data, variant="one-sided", level: float = 0.95, rng: RngLike = None, *,
        mu: Optional[float] = None, location: str = "auto",
        quantile: str = "monte-carlo", quantile_draws: int = 10 ** 6,
        published_cov: bool = False, min_size: int = _MIN_FIT_SIZE) -> FitResult:
    """Fit a three-parameter M-Wright law.

    Parameters
    ----------
    data : array_like
        Observations.
    variant : {"one-sided", "symmetric"}
    level : float
        Confidence level for every interval.
    rng : RngStream, Generator or int, optional
        Drives the Monte Carlo quantile of the one-sided shift interval.
    mu : float, optional
        Known location.  No location interval is produced.
    location : {"auto", "mean", "median"}
        Symmetric location rule; ``"auto"`` applies the efficiency cutoff.
    quantile : {"monte-carlo", "exact"}
        How the one-sided shift interval obtains its quantile.
    quantile_draws : int
        Simulated variates for the Monte Carlo quantile.
    published_cov : bool
        Use the uncorrected alpha-rho cross covariance (see :func:`asymptotic_cov`).
    """
    variant = Variant.parse(variant)
    x = np.asarray(data, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise DomainError("data contain non-finite values")
    if x.size < min_size:
        raise InsufficientData(f"need at least {min_size} observations, got {x.size}")
    notes = []
    ci_mu = None

    if variant is Variant.ONE_SIDED:
        if mu is not None:
            y = x - mu
            if np.any(y < 0):
                raise DomainError("observations fall below the known location")
            stats = log_stats(y)
            mu_hat, used = float(mu), LocationEstimator.KNOWN
        else:
            mu_hat, used = estimate_mu_onesided(x), LocationEstimator.MIN
            stats = log_stats(x - mu_hat, exclude_nonpositive=True)
            notes.append(f"dropped {stats.dropped} observation(s) equal to the minimum")
    else:
        if mu is not None:
            mu_hat, used = float(mu), LocationEstimator.KNOWN
        elif location == "auto":
            mu_hat, used = estimate_mu_symmetric(x)
        elif location in ("mean", "median"):
            used = LocationEstimator(location)
            mu_hat = float(np.mean(x) if location == "mean" else np.median(x))
        else:
            raise ValueError(f"unknown location rule {location!r}")
        stats = log_stats(np.abs(x - mu_hat), exclude_nonpositive=True)
        if stats.dropped:
            notes.append(f"dropped {stats.dropped} observation(s) equal to the location")

    alpha_hat, rho_hat, clamped = estimate_alpha_rho(stats)
    if clamped:
        notes.append(f"alpha estimate clamped to {alpha_hat:.6g} "
                     f"(log-variance {stats.var_xp:.6g})")
    cov = asymptotic_cov(alpha_hat, rho_hat, published=published_cov)
    ci_a, ci_r = ci_alpha_rho(alpha_hat, rho_hat, stats.n, level, cov)

    if used is LocationEstimator.MIN:
        ci_mu = ci_mu_onesided(mu_hat, rho_hat, alpha_hat, x.size, level,
                               _as_stream(rng), quantile_draws, quantile)
    elif used in (LocationEstimator.MEAN, LocationEstimator.MEDIAN):
        ci_mu = ci_mu_symmetric(mu_hat, alpha_hat, rho_hat, x.size, level, used)
        if used is LocationEstimator.MEAN:
            notes.append(f"mean used as location (alpha estimate > {ARE_CUTOFF})"
                         if location == "auto" else "mean used as location")
        else:
            notes.append(f"median used as location (alpha estimate <= {ARE_CUTOFF})"
                         if location == "auto" else "median used as location")

    params = MWrightParams(alpha_hat, rho_hat, mu_hat, variant)
    return FitResult(params=params, ci_alpha=ci_a, ci_rho=ci_r, ci_mu=ci_mu, cov=cov,
                     corr_alpha_rho=cov.corr, location_estimator_used=used,
                     n=int(x.size), n_used=stats.n, diagnostics=notes)


def _row_log_moments(y: np.ndarray, mask: np.ndarray):
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(mask, np.log(np.where(mask, y, 1.0)), 0.0)
        cnt = mask.sum(axis=1)
        mean = logs.sum(axis=1) / cnt
        var = np.where(mask, (logs - mean[:, None]) ** 2, 0.0).sum(axis=1) / cnt
    return mean, var


def _row_alpha_rho(mean, var):
    alpha, _ = _alpha_from_var(var)
    return alpha, np.exp(mean + EULER_GAMMA * (1.0 - alpha))


def estimate_rows(samples, variant="one-sided", mu: Optional[float] = None,
                  location: str = "auto"):
    """Point estimates for every row of a 2-D array of samples.

    Mirrors the point-estimate path of :func:`fit` without intervals.
    Returns arrays ``(alpha, rho, mu)``.
    """
    variant = Variant.parse(variant)
    m = np.atleast_2d(np.asarray(samples, dtype=float))
    rows = m.shape[0]
    if variant is Variant.ONE_SIDED:
        if mu is not None:
            y = m - mu
            mu_hat = np.full(rows, float(mu))
            mask = np.ones_like(y, dtype=bool)
        else:
            mu_hat = m.min(axis=1)
            y = m - mu_hat[:, None]
            mask = y > 0
        alpha, rho = _row_alpha_rho(*_row_log_moments(y, mask))
        return alpha, rho, mu_hat

    if mu is not None:
        centers = np.full(rows, float(mu))
    elif location == "mean":
        centers = m.mean(axis=1)
    elif location == "median":
        centers = np.median(m, axis=1)
    elif location == "auto":
        med = np.median(m, axis=1)
        y = np.abs(m - med[:, None])
        a1, _ = _row_alpha_rho(*_row_log_moments(y, y > 0))
        centers = np.where(a1 > ARE_CUTOFF, m.mean(axis=1), med)
    else:
        raise ValueError(f"unknown location rule {location!r}")
    y = np.abs(m - centers[:, None])
    alpha, rho = _row_alpha_rho(*_row_log_moments(y, y > 0))
    return alpha, rho, centers


def bootstrap_estimates(data, variant="one-sided", b: int = 1000, rng: RngLike = None, *,
                        mu: Optional[float] = None, location: str = "auto",
                        chunk: int = 256):
    """Point estimates over ``b`` n-out-of-n resamples.

    With an :class:`RngStream`, resample ``i`` draws its indices from
    ``rng.substream(i)``.
    """
    x = np.asarray(data, dtype=float).ravel()
    n = x.size
    if n < 2:
        raise InsufficientData(f"need at least 2 observations, got {n}")
    if b < 1:
        raise DomainError("b must be >= 1")
    out = [np.empty(b), np.empty(b), np.empty(b)]
    gen = None if isinstance(rng, RngStream) else as_generator(rng)
    for start in range(0, b, chunk):
        stop = min(start + chunk, b)
        if gen is None:
            idx = np.stack([rng.substream(i).generator().integers(0, n, n)
                            for i in range(start, stop)])
        else:
            idx = gen.integers(0, n, size=(stop - start, n))
        for arr, vals in zip(out, estimate_rows(x[idx], variant, mu=mu, location=location)):
            arr[start:stop] = vals
    return tuple(out)


def bootstrap_percentile_ci(data, variant="one-sided", statistic: str = "alpha",
                            level: float = 0.95, b: int = 1000, rng: RngLike = None, *,
                            mu: Optional[float] = None, location: str = "auto"
                            ) -> ConfidenceInterval:
    """Percentile bootstrap interval (type-8 quantiles of the replicates)."""
    keys = {"alpha": 0, "rho": 1, "mu": 2}
    if statistic not in keys:
        raise ValueError(f"statistic must be one of {sorted(keys)}")
    if statistic == "mu" and mu is not None:
        raise DomainError("location is known; nothing to bootstrap")
    if b < 100:
        raise DomainError(f"bootstrap needs b >= 100, got {b}")
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    reps = bootstrap_estimates(data, variant, b, rng, mu=mu, location=location)[keys[statistic]]
    return percentile_interval(reps, level)


def percentile_interval(replicates, level: float) -> ConfidenceInterval:
    nu = 1.0 - level
    lo, hi = quantile_type8(replicates, [nu / 2.0, 1.0 - nu / 2.0])
    return ConfidenceInterval(float(lo), float(hi), level, CIMethod.BOOTSTRAP_PERCENTILE)
