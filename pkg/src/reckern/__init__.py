"""reckern: streaming recursive kernel regression with a verification harness.

The estimator family is indexed by ell in [0, 1]: each observation i enters
the kernel sums with weight h_i^{-d*ell}, interpolating between the classic
recursive regression weighting (ell = 0) and the semi-recursive one
(ell = 1).  Updates cost O(grid) per observation.  The montecarlo module
replays the estimator over synthetic strongly mixing streams and compares
empirical moments of the estimates and their standardized statistics
against the closed-form limit constants in asymptotics.
"""

from ._accel import HAVE_COMPILED, backend_name, use_backend
from .asymptotics import CltParams, bias_bn, bias_functional, clt_params, plugin_sd, sigma_sq_ell
from .bandwidth import BandwidthSchedule, DivergenceError, RunningBandwidthSums
from .estimator import (
    UNDEFINED,
    EstimatorConfig,
    RecursiveKernelRegression,
    Truncation,
    batch_sums,
    register_m,
)
from .kernels import EPANECHNIKOV, GAUSSIAN, Kernel, make_kernel
from .models import Ar1Model, StreamSampler, make_ar1_model, validate_model
from .montecarlo import ExperimentPlan, McReport, PlanError, run, standardized_stats
from .stats import KsResult, ks_normal, normal_cdf, normal_quantile

__version__ = "0.1.0"

__all__ = [
    "BandwidthSchedule", "RunningBandwidthSums", "DivergenceError",
    "Kernel", "make_kernel", "GAUSSIAN", "EPANECHNIKOV",
    "EstimatorConfig", "RecursiveKernelRegression", "Truncation",
    "UNDEFINED", "batch_sums", "register_m",
    "Ar1Model", "StreamSampler", "make_ar1_model", "validate_model",
    "CltParams", "bias_functional", "bias_bn", "sigma_sq_ell",
    "clt_params", "plugin_sd",
    "ExperimentPlan", "McReport", "PlanError", "run", "standardized_stats",
    "KsResult", "ks_normal", "normal_cdf", "normal_quantile",
    "HAVE_COMPILED", "backend_name", "use_backend",
    "__version__",
]
