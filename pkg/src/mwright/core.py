"""Three-parameter one-sided and symmetric M-Wright distributions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .specfun import EULER_GAMMA, ZETA3, mwright

__all__ = [
    "Variant",
    "MWrightParams",
    "MomentSummary",
    "pdf",
    "moment",
    "moment_summary",
    "log_domain_moments",
]


class Variant(str, enum.Enum):
    ONE_SIDED = "one-sided"
    SYMMETRIC = "symmetric"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"one-sided": cls.ONE_SIDED, "onesided": cls.ONE_SIDED,
                   "symmetric": cls.SYMMETRIC}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown variant {value!r}") from None


@dataclass(frozen=True)
class MWrightParams:
    """Fractional parameter ``alpha``, scale ``rho`` and location ``mu``."""

    alpha: float
    rho: float = 1.0
    mu: float = 0.0
    variant: Variant = Variant.ONE_SIDED

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.rho > 0.0 or not math.isfinite(self.rho):
            raise DomainError(f"rho must be positive and finite, got {self.rho}")
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")

    @property
    def symmetric(self) -> bool:
        return self.variant is Variant.SYMMETRIC

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "rho": self.rho, "mu": self.mu,
                "variant": self.variant.value}


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    cv: Optional[float] = None


def _pdf_scalar(p: MWrightParams, x: float) -> float:
    if p.symmetric:
        return mwright(abs(x - p.mu) / p.rho, p.alpha) / (2.0 * p.rho)
    if x < p.mu:
        return 0.0
    # x == mu gives the right limit 1/(rho Gamma(1 - alpha)).
    return mwright((x - p.mu) / p.rho, p.alpha) / p.rho


def pdf(p: MWrightParams, x):
    """Density at ``x`` (scalar or array-like).

    The one-sided density is zero below ``mu`` and takes its right limit
    ``1/(rho Gamma(1-alpha))`` at ``x == mu``.
    """
    if np.ndim(x) == 0:
        return _pdf_scalar(p, float(x))
    xs = np.asarray(x, dtype=float)
    return np.array([_pdf_scalar(p, float(v)) for v in xs.ravel()]).reshape(xs.shape)


def moment(p: MWrightParams, kappa: float) -> float:
    """E (X - mu)^kappa.

    One-sided: rho^kappa Gamma(1+kappa) / Gamma(1+alpha kappa) for kappa > -1.
    Symmetric: the same for even integer kappa, zero for odd.
    """
    kappa = float(kappa)
    if not kappa > -1.0:
        raise DomainError(f"moment order must exceed -1, got {kappa}")
    if p.symmetric:
        if kappa != math.floor(kappa):
            raise DomainError("symmetric moments are defined for integer orders only")
        if int(kappa) % 2 == 1:
            return 0.0
    log_m = (kappa * math.log(p.rho) + math.lgamma(1.0 + kappa)
             - math.lgamma(1.0 + p.alpha * kappa))
    return math.exp(log_m)


def moment_summary(p: MWrightParams) -> MomentSummary:
    a, r = p.alpha, p.rho
    second = 1.0 / (a * math.gamma(2.0 * a))
    if p.symmetric:
        return MomentSummary(mean=p.mu, variance=r * r * second)
    first = 1.0 / (a * math.gamma(a))
    mean = p.mu + r * first
    variance = r * r * (second - first * first)
    cv = math.sqrt(variance) / mean if mean != 0 else math.nan
    return MomentSummary(mean=mean, variance=variance, cv=cv)


def log_domain_moments(alpha: float, rho: float) -> tuple[float, float, float, float]:
    """Mean, variance, third and fourth central moments of log|X - mu|.

    Valid for both variants, since |X - mu| / rho has the law of S^(-alpha).
    ``alpha = 1`` is accepted as the degenerate boundary.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    a = alpha
    mean = math.log(rho) + EULER_GAMMA * (a - 1.0)
    var = math.pi ** 2 * (1.0 - a * a) / 6.0
    mu3 = 2.0 * (a ** 3 - 1.0) * ZETA3
    mu4 = math.pi ** 4 * (a ** 4 - 10.0 * a * a + 9.0) / 60.0
    return mean, var, mu3, mu4
