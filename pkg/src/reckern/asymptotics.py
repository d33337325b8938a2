"""Closed-form limit constants of the estimator family.

For a point x with f(x) > 0, the centered and scaled estimator satisfies

    sqrt(n h_n^d) * (r_n(x) - r(x) - B_n)  ->  N(0, sigma_ell^2(x) V(x) / f(x)^2)

with deterministic bias

    B_n = h_n^2 * (beta_{d(1-ell)+2} / beta_{d(1-ell)})
          * (1/2) sum_ij (d2r/dx_i dx_j + 2 dlnf/dx_i dr/dx_j) * M_ij

and variance constant

    sigma_ell^2(x) = (beta_{d(1-2ell)} / beta_{d(1-ell)}^2) * f(x) * int K^2.

When n h_n^{d+4} -> 0 the bias term may be dropped (``zero_bias``).
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimator import EstimatorConfig
from .kernels import Kernel


class DomainError(ValueError):
    """A limit constant was requested where it is not defined (f or V <= 0)."""


@dataclass(frozen=True)
class CltParams:
    """Centering and scaling of the limit law at one grid point."""

    bias_bn: float
    sd_limit: float
    scale: float


def bias_functional(hessian: np.ndarray, kernel: Kernel) -> float:
    """Curvature functional ``(1/2) sum_ij H_ij * M_ij`` (the O(h^2) driver)."""
    hessian = np.asarray(hessian, dtype=float)
    if hessian.shape != (kernel.dim, kernel.dim):
        raise ValueError(
            f"hessian shape {hessian.shape} does not match kernel dimension {kernel.dim}"
        )
    return 0.5 * float(np.sum(hessian * kernel.second_moment))


def bias_bn(model, cfg: EstimatorConfig, x, n: int) -> float:
    """Deterministic bias term B_n at the given sample size."""
    if model.f(x) <= 0.0:
        raise DomainError(f"bias term undefined where f(x) = 0 (x = {x})")
    sched = cfg.schedule
    bracket = cfg.kernel.second_moment * (
        model.hess_r(x)
        + 2.0 * np.outer(model.grad_log_f(x), model.grad_r(x))
    )
    curvature = 0.5 * float(np.sum(bracket))
    ratio = sched.beta(sched.r_bias) / sched.beta(sched.r_den)
    return sched.h(n) ** 2 * ratio * curvature


def sigma_sq_ell(model, cfg: EstimatorConfig, x) -> float:
    """Variance constant sigma_ell^2(x) of the kernel sums."""
    fx = model.f(x)
    if fx <= 0.0:
        raise DomainError(f"variance constant undefined where f(x) = 0 (x = {x})")
    sched = cfg.schedule
    ratio = sched.beta(sched.r_var) / sched.beta(sched.r_den) ** 2
    return ratio * fx * cfg.kernel.l2_norm_sq


def clt_params(model, cfg: EstimatorConfig, x, n: int,
               zero_bias: bool = False) -> CltParams:
    """Assemble the limit-law parameters at a grid point.

    ``zero_bias`` drops B_n; callers should set it only in the
    bias-cancellation regime flagged by the bandwidth validator.
    """
    fx = model.f(x)
    vx = model.V(x)
    if fx <= 0.0 or vx <= 0.0:
        raise DomainError(f"limit law undefined at x = {x} (f = {fx}, V = {vx})")
    sd = math.sqrt(sigma_sq_ell(model, cfg, x) * vx / fx ** 2)
    hn = cfg.schedule.h(n)
    return CltParams(
        bias_bn=0.0 if zero_bias else bias_bn(model, cfg, x, n),
        sd_limit=sd,
        scale=math.sqrt(n * hn ** cfg.dim),
    )


def plugin_sd(cfg: EstimatorConfig, f_hat_value: float, v_estimate: float) -> float:
    """Limit standard deviation with f replaced by its estimate.

    Since sigma_ell^2 is proportional to f, the net f-dependence of
    sd = sqrt(sigma_ell^2 V / f^2) is f**-1/2.
    """
    if f_hat_value <= 0.0:
        raise DomainError(f"plug-in sd undefined for f_hat = {f_hat_value}")
    if v_estimate <= 0.0:
        raise DomainError(f"plug-in sd undefined for V estimate = {v_estimate}")
    sched = cfg.schedule
    ratio = sched.beta(sched.r_var) / sched.beta(sched.r_den) ** 2
    return math.sqrt(ratio * cfg.kernel.l2_norm_sq * v_estimate / f_hat_value)
