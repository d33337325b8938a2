"""Minimal statistics kit: standard-normal CDF/quantiles, a one-sample
Kolmogorov-Smirnov test against N(0,1), and moment summaries.

The KS test targets the fully specified standard normal (the limit law
fixes both parameters), so no estimated-parameter correction applies.  The
asymptotic 1% critical value 1.628/sqrt(n) is used; sample sizes here are
in the hundreds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SQRT2 = math.sqrt(2.0)
KS_CRITICAL_01 = 1.628

# Acklam's rational starting approximation for the inverse normal CDF
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)


def normal_cdf(t: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-t / _SQRT2)


def normal_pdf(t: float) -> float:
    return math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF on (0, 1), accurate to ~1e-15.

    Rational starting value (Acklam) polished with two Halley steps on the
    erfc-based CDF.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile requires p in (0, 1), got {p}")
    p_low, p_high = 0.02425, 1.0 - 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    elif p <= p_high:
        q = p - 0.5
        r = q * q
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
              / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    for _ in range(2):
        e = normal_cdf(x) - p
        u = e / normal_pdf(x)
        x -= u / (1.0 + 0.5 * x * u)
    return x


@dataclass(frozen=True)
class KsResult:
    d_stat: float
    n_eff: int
    critical_01: float
    passed: bool


def ks_normal(sample) -> KsResult:
    """One-sample KS statistic against N(0,1) via the sorted-sample formula.

    D = max_i max(i/n - Phi(t_(i)), Phi(t_(i)) - (i-1)/n).
    """
    t = np.sort(np.asarray(sample, dtype=float))
    n = t.size
    if n < 20:
        raise ValueError(f"KS test requires at least 20 observations, got {n}")
    cdf = 0.5 * np.vectorize(math.erfc)(-t / _SQRT2)
    i = np.arange(1, n + 1)
    d = float(np.max(np.maximum(i / n - cdf, cdf - (i - 1) / n)))
    crit = KS_CRITICAL_01 / math.sqrt(n)
    return KsResult(d_stat=d, n_eff=n, critical_01=crit, passed=d < crit)


def moments(sample) -> tuple[float, float]:
    """Mean and unbiased variance."""
    a = np.asarray(sample, dtype=float)
    if a.size < 2:
        raise ValueError("moment summary requires at least 2 observations")
    return float(a.mean()), float(a.var(ddof=1))
