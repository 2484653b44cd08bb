"""Scalar special functions used by the M-Wright families.

The M-Wright function is evaluated by its power series where that series is
numerically usable, and otherwise by a one-dimensional integral over Kanter's
function (the same function the sampler uses).  The Mittag-Leffler function
is only needed on the negative real axis.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, NonConvergence, PoleError

__all__ = [
    "Constants",
    "CONSTANTS",
    "EULER_GAMMA",
    "ZETA3",
    "SeriesControl",
    "gamma_fn",
    "kanter_log_a",
    "mwright_series",
    "mwright_integral",
    "mwright_sf",
    "mwright_cdf",
    "mwright",
    "mittag_leffler_neg",
    "kolmogorov_tail",
]

EULER_GAMMA = 0.57721566490153286061
ZETA3 = 1.2020569031595942854


@dataclass(frozen=True)
class Constants:
    euler_gamma: float = EULER_GAMMA
    zeta3: float = ZETA3
    pi: float = math.pi


CONSTANTS = Constants()


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the infinite sums.

    ``max_magnitude`` bounds the largest partial term; beyond it the
    alternating cancellation has destroyed the double-precision result.
    """

    max_terms: int = 200
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_magnitude: float = 1e15

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("at least one of abs_tol, rel_tol must be positive")
        if not self.max_magnitude > 0:
            raise ValueError("max_magnitude must be positive")


DEFAULT_CONTROL = SeriesControl()
# Used by the dispatching evaluator: switch to quadrature well before the
# cancellation costs more than ~1e-12 absolute.
_STRICT_CONTROL = SeriesControl(max_magnitude=1e3)


def gamma_fn(x: float) -> float:
    """Gamma function; raises :class:`PoleError` at 0, -1, -2, ..."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    return math.gamma(x)


def _rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    if x > 171.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def _sin_pi(t: float) -> float:
    """sin(pi * t) with exact zeros at the integers."""
    r = math.fmod(t, 2.0)
    if r == math.floor(r):
        return 0.0
    return math.sin(math.pi * r)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"fractional parameter must lie in (0, 1), got {alpha}")
    return alpha


def kanter_log_a(v, alpha: float):
    """Logarithm of Kanter's function on ``v`` in (0, 1).

    A(v) = sin((1-a) pi v) sin(a pi v)^(a/(1-a)) / sin(pi v)^(1/(1-a)).
    Evaluated in the log domain; sin(pi v)^(1/(1-a)) underflows near v = 0
    for a close to one.  Increasing in v, with A(0+) = (1-a) a^(a/(1-a)).
    """
    v = np.asarray(v, dtype=float)
    a = alpha
    c = 1.0 / (1.0 - a)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (np.log(np.sin((1.0 - a) * np.pi * v))
                + a * c * np.log(np.sin(a * np.pi * v))
                - c * np.log(np.sin(np.pi * v)))


def mwright_series(x: float, alpha: float, ctrl: SeriesControl = DEFAULT_CONTROL,
                   closed_form: bool = True) -> float:
    """M-Wright function M_alpha(x) for x >= 0 by its reflected power series.

    Sums (1/pi) sum_{j>=1} (-x)^(j-1)/(j-1)! Gamma(alpha j) sin(pi alpha j)
    exactly (``math.fsum``) over the floating-point terms.

    Raises
    ------
    NonConvergence
        If a term exceeds ``ctrl.max_magnitude`` or the tolerance is not met
        within ``ctrl.max_terms`` terms.  Large x at alpha near 1 hits this.
    """
    alpha = _check_alpha(alpha)
    x = float(x)
    if not x >= 0:
        raise DomainError(f"M-Wright argument must be non-negative, got {x}")
    if closed_form and alpha == 0.5:
        return math.exp(-x * x / 4.0) / math.sqrt(math.pi)
    if x == 0.0:
        return 1.0 / math.gamma(1.0 - alpha)

    terms = []
    power = 1.0  # x^(j-1)/(j-1)!
    log_x = math.log(x)
    biggest = 0.0
    past_peak = False
    prev_env = 0.0
    for j in range(1, ctrl.max_terms + 1):
        aj = alpha * j
        if j > 1:
            power *= x / (j - 1)
        if aj < 170.0 and math.isfinite(power):
            env = power * math.gamma(aj)
        else:
            env = math.exp((j - 1) * log_x - math.lgamma(j) + math.lgamma(aj))
        biggest = max(biggest, env)
        if biggest > ctrl.max_magnitude or not math.isfinite(env):
            raise NonConvergence(
                f"M-Wright series term magnitude {biggest:.3g} exceeds "
                f"{ctrl.max_magnitude:.3g} at x={x}, alpha={alpha}")
        sign = -1.0 if (j - 1) % 2 else 1.0
        terms.append(sign * env * _sin_pi(aj))
        if env < prev_env:
            past_peak = True
        prev_env = env
        if past_peak and env / math.pi <= max(ctrl.abs_tol,
                                              ctrl.rel_tol * abs(math.fsum(terms)) / math.pi):
            return max(math.fsum(terms) / math.pi, 0.0)
    raise NonConvergence(
        f"M-Wright series did not converge in {ctrl.max_terms} terms "
        f"(x={x}, alpha={alpha})")


def _log_a_root(target: float, alpha: float) -> float | None:
    """v in (0, 1) with log A(v) == target, or None when outside the range."""
    lo, hi = 1e-12, 1.0 - 1e-12
    f_lo = float(kanter_log_a(lo, alpha)) - target
    f_hi = float(kanter_log_a(hi, alpha)) - target
    if f_lo >= 0 or f_hi <= 0:
        return None
    return optimize.brentq(lambda v: float(kanter_log_a(v, alpha)) - target, lo, hi,
                           xtol=1e-14)


def _kanter_quad(func, alpha: float, log_y: float) -> float:
    points = None
    v_star = _log_a_root(-log_y, alpha)
    if v_star is not None and 0.0 < v_star < 1.0:
        points = [v_star]
    # Deep in the lower tail the integrand is a narrow spike near v = 1 on a
    # ~1e-30 background; QUADPACK flags roundoff there although the value is fine.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(func, 0.0, 1.0, points=points, limit=200,
                                epsabs=1e-15, epsrel=1e-11)
    return val


def mwright_integral(x: float, alpha: float) -> float:
    """M_alpha(x) by quadrature of Kanter's representation.

    With X = S^(-alpha), P(X > x) = int_0^1 exp(-A(v) x^(1/(1-alpha))) dv, so
    M_alpha(x) = c x^(alpha c) int_0^1 A(v) exp(-A(v) x^c) dv, c = 1/(1-alpha).
    Stable for every x > 0; slower than the series.
    """
    alpha = _check_alpha(alpha)
    x = float(x)
    if not x >= 0:
        raise DomainError(f"M-Wright argument must be non-negative, got {x}")
    if x == 0.0:
        return 1.0 / math.gamma(1.0 - alpha)
    c = 1.0 / (1.0 - alpha)
    log_y = c * math.log(x)
    y = math.exp(log_y)
    prefactor = math.log(c) + alpha * c * math.log(x)

    def integrand(v):
        la = float(kanter_log_a(v, alpha))
        if not math.isfinite(la):
            return 0.0
        return math.exp(prefactor + la - math.exp(la) * y)

    return _kanter_quad(integrand, alpha, log_y)


def mwright_sf(x: float, alpha: float) -> float:
    """Survival function P(X > x) of the one-sided standard law."""
    alpha = _check_alpha(alpha)
    x = float(x)
    if x <= 0.0:
        return 1.0
    c = 1.0 / (1.0 - alpha)
    log_y = c * math.log(x)
    y = math.exp(log_y)

    def integrand(v):
        la = float(kanter_log_a(v, alpha))
        if not math.isfinite(la):
            return 0.0
        return math.exp(-math.exp(la) * y)

    return min(max(_kanter_quad(integrand, alpha, log_y), 0.0), 1.0)


def mwright_cdf(x: float, alpha: float) -> float:
    """P(X <= x) of the one-sided standard law, accurate in the lower tail."""
    alpha = _check_alpha(alpha)
    x = float(x)
    if x <= 0.0:
        return 0.0
    c = 1.0 / (1.0 - alpha)
    log_y = c * math.log(x)
    y = math.exp(log_y)

    def integrand(v):
        la = float(kanter_log_a(v, alpha))
        if not math.isfinite(la):
            return 1.0
        return -math.expm1(-math.exp(la) * y)

    return min(max(_kanter_quad(integrand, alpha, log_y), 0.0), 1.0)


def mwright(x: float, alpha: float) -> float:
    """M_alpha(x): series where it is accurate, quadrature elsewhere."""
    try:
        return mwright_series(x, alpha, _STRICT_CONTROL)
    except NonConvergence:
        return mwright_integral(x, alpha)


def _ml_series(z: float, order: float, ctrl: SeriesControl) -> tuple[float, float]:
    terms = []
    biggest = 0.0
    power = 1.0
    for j in range(ctrl.max_terms):
        if j > 0:
            power *= z
        term = power * _rgamma(1.0 + order * j)
        biggest = max(biggest, abs(term))
        if biggest > ctrl.max_magnitude or not math.isfinite(term):
            raise NonConvergence(f"Mittag-Leffler series overflow at z={z}")
        terms.append(term)
        if j > 2 and abs(term) <= max(ctrl.abs_tol, ctrl.rel_tol * abs(math.fsum(terms))):
            return math.fsum(terms), biggest
    raise NonConvergence(f"Mittag-Leffler series did not converge at z={z}")


def _ml_asymptotic(z: float, order: float, ctrl: SeriesControl) -> tuple[float, float]:
    """Optimally truncated -sum_k z^(-k)/Gamma(1 - order k); returns (value, error)."""
    total = []
    prev = math.inf
    for k in range(1, ctrl.max_terms + 1):
        term = -(z ** -k) * _rgamma(1.0 - order * k)
        mag = abs(term)
        if mag > prev and mag > 0:
            break
        total.append(term)
        if mag > 0:
            prev = mag
        if mag == 0 and k > 1 and prev <= ctrl.abs_tol:
            break
    return math.fsum(total), prev


def _ml_integral(z: float, order: float) -> float:
    """E_a(-s) for 0 < a < 1 as a Laplace integral of a positive spectral density."""
    s = -z
    t = s ** (1.0 / order)
    sa, ca = math.sin(order * math.pi), math.cos(order * math.pi)

    def kernel(r):
        if r == 0.0:
            return 0.0
        ra = r ** order
        return math.exp(-r * t) * sa / math.pi * ra / r / (ra * ra + 2.0 * ra * ca + 1.0)

    head, _ = integrate.quad(kernel, 0.0, 1.0, limit=200, epsabs=1e-15, epsrel=1e-12)
    tail, _ = integrate.quad(kernel, 1.0, math.inf, limit=200, epsabs=1e-15, epsrel=1e-12)
    return head + tail


def mittag_leffler_neg(z: float, order: float,
                       ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Mittag-Leffler function E_order(z) on the non-positive real axis.

    Power series for |z| <= 5, optimally truncated asymptotic expansion for
    z < -5.  For order < 1 either route falls back to the Laplace-integral
    representation when it cannot meet tolerance.
    """
    z = float(z)
    order = float(order)
    if not z <= 0:
        raise DomainError(f"z must be <= 0, got {z}")
    if not 0.0 < order <= 2.0:
        raise DomainError(f"order must lie in (0, 2], got {order}")
    if z == 0.0:
        return 1.0
    if order == 1.0:
        return math.exp(z)
    if order == 2.0:
        return math.cos(math.sqrt(-z))

    if z >= -5.0:
        try:
            value, biggest = _ml_series(z, order, ctrl)
            if biggest * 1e-15 <= max(ctrl.abs_tol, 1e-12) or order >= 1.0:
                return value
        except NonConvergence:
            if order >= 1.0:
                raise
        return _ml_integral(z, order)

    if order < 1.0:
        value, err = _ml_asymptotic(z, order, ctrl)
        if err <= max(ctrl.abs_tol, ctrl.rel_tol * abs(value)):
            return value
        return _ml_integral(z, order)

    value, biggest = _ml_series(z, order, SeriesControl(
        max_terms=max(ctrl.max_terms, 400), abs_tol=ctrl.abs_tol, rel_tol=ctrl.rel_tol,
        max_magnitude=min(ctrl.max_magnitude, 1e6)))
    return value


def kolmogorov_tail(lam: float) -> float:
    """Asymptotic Kolmogorov tail Q(lam) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lam^2)."""
    lam = float(lam)
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    if lam < 0.2:
        return 1.0
    if lam < 1.0:
        # Jacobi theta form of the CDF converges fast for small lambda.
        s = math.fsum(math.exp(-(2 * k - 1) ** 2 * math.pi ** 2 / (8.0 * lam * lam))
                      for k in range(1, 20))
        return min(max(1.0 - math.sqrt(2.0 * math.pi) / lam * s, 0.0), 1.0)
    s = math.fsum((-1) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam) for k in range(1, 101))
    return min(max(2.0 * s, 0.0), 1.0)
