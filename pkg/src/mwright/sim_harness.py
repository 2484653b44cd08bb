"""Monte Carlo bias, dispersion and coverage studies.

Each replicate ``r`` of a cell draws its data from ``RngStream(seed, r, (0,))``,
its shift-interval quantile from ``(1,)`` and its bootstrap resamples from
``(2, i)``.  Cells therefore share common random numbers across parameter
combinations, and results never depend on scheduling order.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .core import MWrightParams, Variant
from .errors import EstimationError
from .estimate import bootstrap_estimates, fit, percentile_interval
from .sampling import RngStream, sample_mwright
from .stats_util import pct_bias, pct_mad

__all__ = ["Case", "Combo", "SimPlan", "SimReport", "ReplicateError", "PRESETS",
           "preset_plan", "run_bias_mad", "run_coverage"]

log = logging.getLogger(__name__)

PARAMETERS = ("alpha", "rho", "mu")


class Case(str, enum.Enum):
    ONE_SIDED_MU_ZERO = "one-sided-mu-zero"
    ONE_SIDED_SHIFTED = "one-sided-shifted"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class Combo:
    params: MWrightParams
    case: Case

    def __post_init__(self):
        case = Case(self.case)
        object.__setattr__(self, "case", case)
        want = Variant.SYMMETRIC if case is Case.SYMMETRIC else Variant.ONE_SIDED
        if self.params.variant is not want:
            raise ValueError(f"case {case.value} needs a {want.value} parameter set")

    @classmethod
    def make(cls, alpha, rho, mu=0.0, case=Case.ONE_SIDED_MU_ZERO) -> "Combo":
        case = Case(case)
        variant = Variant.SYMMETRIC if case is Case.SYMMETRIC else Variant.ONE_SIDED
        return cls(MWrightParams(alpha, rho, mu, variant), case)

    @property
    def estimated(self) -> tuple:
        """Parameters the case estimates (mu is known when it is zero)."""
        if self.case is Case.ONE_SIDED_MU_ZERO:
            return ("alpha", "rho")
        return PARAMETERS

    def label(self) -> str:
        p = self.params
        return f"{self.case.value}({p.alpha:g}, {p.rho:g}, {p.mu:g})"


@dataclass
class SimPlan:
    combos: list
    sample_sizes: list = field(default_factory=lambda: [100, 1000, 10000])
    replicates: int = 1000
    level: float = 0.95
    bootstrap_b: int = 1000
    seed: int = 0
    bootstrap_max_n: int = 1000
    quantile: str = "monte-carlo"
    quantile_draws: int = 10 ** 6
    symmetric_location: str = "mean"
    threads: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not self.combos:
            raise ValueError("plan has no parameter combinations")
        if any(int(n) < 10 for n in self.sample_sizes):
            raise ValueError("sample sizes must be >= 10")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must lie in (0, 1)")
        self.combos = [c if isinstance(c, Combo) else Combo.make(*c) for c in self.combos]


class ReplicateError(EstimationError):
    def __init__(self, combo: Combo, n: int, stream_id: int, cause: Exception):
        super().__init__(f"replicate failed for {combo.label()}, n={n}, "
                         f"stream_id={stream_id}: {cause}")
        self.combo, self.n, self.stream_id = combo, n, stream_id


@dataclass
class SimReport:
    """One row per (combo, n, parameter).

    Row keys: case, alpha, rho, mu, n, parameter, pct_bias, pct_mad,
    coverage, coverage_bootstrap.  Metrics not computed are ``None``.
    """

    kind: str
    rows: list
    seed: int
    replicates: int
    level: float
    metadata: dict = field(default_factory=dict)

    def cell(self, combo: Combo, n: int, parameter: str) -> dict:
        p = combo.params
        for row in self.rows:
            if (row["case"] == combo.case.value and row["alpha"] == p.alpha
                    and row["rho"] == p.rho and row["mu"] == p.mu and row["n"] == n
                    and row["parameter"] == parameter):
                return row
        raise KeyError((combo.label(), n, parameter))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "replicates": self.replicates,
                "level": self.level, "metadata": self.metadata, "rows": self.rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        """Flat CSV: one line per combo x n x parameter x metric."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case", "alpha", "rho", "mu", "n", "parameter", "metric", "value"])
        for row in self.rows:
            for metric in ("pct_bias", "pct_mad", "coverage", "coverage_bootstrap"):
                if row.get(metric) is not None:
                    w.writerow([row["case"], repr(row["alpha"]), repr(row["rho"]),
                                repr(row["mu"]), row["n"], row["parameter"], metric,
                                repr(row[metric])])
        return buf.getvalue()


def _fit_replicate(plan: SimPlan, combo: Combo, n: int, r: int, intervals: bool,
                   bootstrap: bool) -> dict:
    stream = RngStream(plan.seed, r)
    p = combo.params
    data = sample_mwright(p, stream.substream(0), n)
    known_mu = 0.0 if combo.case is Case.ONE_SIDED_MU_ZERO else None
    res = fit(data, p.variant, plan.level, stream.substream(1), mu=known_mu,
              location=plan.symmetric_location, quantile=plan.quantile,
              quantile_draws=plan.quantile_draws, min_size=2)
    out = {"alpha": res.params.alpha, "rho": res.params.rho, "mu": res.params.mu}
    if intervals:
        cis = {"alpha": res.ci_alpha, "rho": res.ci_rho, "mu": res.ci_mu}
        for name in combo.estimated:
            out[f"cover_{name}"] = cis[name].contains(getattr(p, name))
    if bootstrap:
        reps = bootstrap_estimates(data, p.variant, plan.bootstrap_b, stream.substream(2),
                                   mu=known_mu, location=plan.symmetric_location)
        for name, arr in zip(PARAMETERS, reps):
            if name in combo.estimated:
                out[f"boot_{name}"] = percentile_interval(arr, plan.level).contains(
                    getattr(p, name))
    return out


def _run_cell(plan: SimPlan, combo: Combo, n: int, intervals: bool, bootstrap: bool):
    def one(r):
        try:
            return _fit_replicate(plan, combo, n, r, intervals, bootstrap)
        except Exception as exc:  # identify the failing replicate
            raise ReplicateError(combo, n, r, exc) from exc

    if plan.threads > 1:
        with ThreadPoolExecutor(plan.threads) as pool:
            results = list(pool.map(one, range(plan.replicates)))
    else:
        results = [one(r) for r in range(plan.replicates)]
    return results


def _aggregate(combo: Combo, n: int, results: list, intervals: bool, bootstrap: bool):
    rows = []
    p = combo.params
    for name in combo.estimated:
        truth = getattr(p, name)
        est = np.array([res[name] for res in results])
        row = {"case": combo.case.value, "alpha": p.alpha, "rho": p.rho, "mu": p.mu,
               "n": n, "parameter": name,
               "pct_bias": pct_bias(est, truth) if truth != 0 else None,
               "pct_mad": pct_mad(est, truth) if truth != 0 else None,
               "coverage": None, "coverage_bootstrap": None}
        if intervals:
            row["coverage"] = float(np.mean([res[f"cover_{name}"] for res in results]))
        if bootstrap:
            row["coverage_bootstrap"] = float(np.mean([res[f"boot_{name}"] for res in results]))
        rows.append(row)
    return rows


def _run(plan: SimPlan, kind: str, intervals: bool, include_bootstrap: bool) -> SimReport:
    rows = []
    started = time.perf_counter()
    for combo in plan.combos:
        for n in plan.sample_sizes:
            n = int(n)
            boot = include_bootstrap and n <= plan.bootstrap_max_n
            t0 = time.perf_counter()
            results = _run_cell(plan, combo, n, intervals, boot)
            rows.extend(_aggregate(combo, n, results, intervals, boot))
            log.info("%s n=%d done in %.1fs", combo.label(), n, time.perf_counter() - t0)
    log.info("%s study finished in %.1fs", kind, time.perf_counter() - started)
    # Wall-clock time is logged, not stored: reports must be byte-reproducible.
    meta = {"version": __version__, "sample_sizes": [int(n) for n in plan.sample_sizes],
            "bootstrap_b": plan.bootstrap_b if include_bootstrap else None,
            "bootstrap_max_n": plan.bootstrap_max_n if include_bootstrap else None,
            "quantile": plan.quantile, "quantile_draws": plan.quantile_draws,
            "symmetric_location": plan.symmetric_location}
    return SimReport(kind=kind, rows=rows, seed=plan.seed, replicates=plan.replicates,
                     level=plan.level, metadata=meta)


def run_bias_mad(plan: SimPlan) -> SimReport:
    """Percentage bias and MAD of the point estimates per cell."""
    return _run(plan, "bias-mad", intervals=False, include_bootstrap=False)


def run_coverage(plan: SimPlan, include_bootstrap: bool = True) -> SimReport:
    """Interval coverage per cell, with percentile-bootstrap columns if requested.

    Bootstrap columns are skipped for sample sizes above ``plan.bootstrap_max_n``.
    """
    return _run(plan, "coverage", intervals=True, include_bootstrap=include_bootstrap)


_BASE = [(0.4, 150.0), (0.6, 8.77), (0.8, 375.0), (0.95, 1000.0)]
_SHIFTED = [(0.4, 150.0, -78.0), (0.6, 8.77, 25.2), (0.8, 375.0, 375.0),
            (0.95, 1000.0, 500.0)]

PRESETS = {
    "table1": ("bias-mad", [Combo.make(a, r, 0.0, Case.ONE_SIDED_MU_ZERO) for a, r in _BASE]),
    "table2": ("coverage", [Combo.make(a, r, 0.0, Case.ONE_SIDED_MU_ZERO) for a, r in _BASE]),
    "table3": ("bias-mad", [Combo.make(a, r, m, Case.ONE_SIDED_SHIFTED) for a, r, m in _SHIFTED]),
    "table4": ("coverage", [Combo.make(a, r, m, Case.ONE_SIDED_SHIFTED) for a, r, m in _SHIFTED]),
    "table5": ("bias-mad", [Combo.make(a, r, m, Case.SYMMETRIC) for a, r, m in _SHIFTED]),
    "table6": ("coverage", [Combo.make(a, r, m, Case.SYMMETRIC) for a, r, m in _SHIFTED]),
}


def preset_plan(name: str, **overrides) -> SimPlan:
    try:
        _, combos = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return SimPlan(combos=list(combos), **overrides)
