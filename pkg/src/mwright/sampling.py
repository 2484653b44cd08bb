"""Random variates for the positive stable subordinator and M-Wright laws.

Draws use Kanter's representation S = (A(V)/W)^((1-a)/a) with V uniform on
(0, 1) and W standard exponential, so X = S^(-a) = (W/A(V))^(1-a) exactly.

Streams are PCG64 generators keyed by ``SeedSequence(seed, spawn_key=...)``;
the same (seed, stream_id, path) always yields the same draws.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import MWrightParams
from .errors import DomainError
from .specfun import kanter_log_a

__all__ = ["RngStream", "as_generator", "sample_positive_stable", "sample_standard",
           "sample_mwright"]


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream identified by ``(seed, stream_id, path)``.

    ``path`` addresses sub-streams (for example a bootstrap resample inside a
    replicate) without touching the parent's draws.
    """

    seed: int = 0
    stream_id: int = 0
    path: tuple = ()

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64 or not 0 <= self.stream_id < 2 ** 64:
            raise ValueError("seed and stream_id must be unsigned 64-bit integers")

    def substream(self, *keys: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id, self.path + tuple(int(k) for k in keys))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,) + self.path)
        return np.random.Generator(np.random.PCG64(ss))


RngLike = Union[RngStream, np.random.Generator, int, None]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Fresh generator for an :class:`RngStream`; generators pass through."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return RngStream(0 if rng is None else int(rng)).generator()


def _kanter_parts(alpha: float, gen: np.random.Generator, n: int):
    """log A(V) and log W for ``n`` draws."""
    v = gen.random(n)
    log_a = kanter_log_a(v, alpha)
    bad = ~np.isfinite(log_a)
    # V == 0 gives 0/0; redraw (probability-zero event).
    while bad.any():
        v[bad] = gen.random(int(bad.sum()))
        log_a[bad] = kanter_log_a(v[bad], alpha)
        bad = ~np.isfinite(log_a)
    log_w = np.log(gen.standard_exponential(n))
    return log_a, log_w


def _check(alpha: float, n: int) -> None:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if int(n) < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")


def sample_positive_stable(alpha: float, rng: RngLike, n: int) -> np.ndarray:
    """Positive stable draws with Laplace transform exp(-beta^alpha)."""
    _check(alpha, n)
    log_a, log_w = _kanter_parts(alpha, as_generator(rng), int(n))
    return np.exp((1.0 - alpha) / alpha * (log_a - log_w))


def sample_standard(alpha: float, rng: RngLike, n: int) -> np.ndarray:
    """Draws of the standard one-sided law M_{alpha,1,0}."""
    _check(alpha, n)
    log_a, log_w = _kanter_parts(alpha, as_generator(rng), int(n))
    return np.exp((1.0 - alpha) * (log_w - log_a))


def sample_mwright(p: MWrightParams, rng: RngLike, n: int) -> np.ndarray:
    """Draws from X = mu + rho U S^(-alpha).

    U is identically 1 for the one-sided law and an independent fair sign
    for the symmetric one.
    """
    gen = as_generator(rng)
    x = sample_standard(p.alpha, gen, n)
    if p.symmetric:
        signs = gen.integers(0, 2, size=int(n)) * 2 - 1
        x = x * signs
    return p.mu + p.rho * x
