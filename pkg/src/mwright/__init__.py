"""Inference for the three-parameter one-sided and symmetric M-Wright laws."""

__version__ = "0.1.0"

from .core import MWrightParams, MomentSummary, Variant, log_domain_moments, moment, moment_summary, pdf  # noqa: E402
from .errors import (DomainError, EstimationError, InputError, InsufficientData,  # noqa: E402
                     MWrightError, NonConvergence, PoleError, ZeroObservation)
from .estimate import FitResult, asymptotic_cov, bootstrap_percentile_ci, fit  # noqa: E402
from .sampling import RngStream, sample_mwright, sample_positive_stable  # noqa: E402

__all__ = [
    "__version__", "MWrightParams", "MomentSummary", "Variant", "pdf", "moment",
    "moment_summary", "log_domain_moments", "MWrightError", "InputError",
    "EstimationError", "DomainError", "PoleError", "NonConvergence", "InsufficientData",
    "ZeroObservation", "FitResult", "fit", "asymptotic_cov", "bootstrap_percentile_ci", "RngStream",
    "sample_mwright", "sample_positive_stable",
]
