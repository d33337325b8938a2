"""Power-law bandwidth schedules and their Cesàro statistics.

The schedule is ``h_n = c * n**-nu``.  Every asymptotic constant in the
theory is driven by the limits ``beta_r = lim (1/n) sum_i (h_i/h_n)**r``,
which equal ``1/(1 - nu*r)`` for power laws whenever ``nu*r < 1``.  The
finite-n average ``b_nr`` is kept as the independent summation oracle.

The estimator-family parameter ``ell`` lives here because the exponents the
estimator needs -- ``d(1-ell)``, ``d(1-2*ell)`` and ``d(1-ell)+2`` -- are
pure bandwidth arithmetic; callers never assemble them by hand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reports import ValidationReport


class DivergenceError(ValueError):
    """A requested Cesàro limit does not exist (``nu*r >= 1``)."""


@dataclass(frozen=True)
class BandwidthSchedule:
    """Bandwidth sequence ``h_n = c * n**-nu`` with family parameter ell.

    ``nu = 0`` (constant bandwidth) is constructible for diagnostics even
    though it fails validation: the weight-cancellation identities of the
    estimator are tested in that degenerate mode.
    """

    c: float
    nu: float
    dim: int
    ell: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"bandwidth constant c must be positive, got {self.c}")
        if not 0.0 <= self.nu < 1.0:
            raise ValueError(f"bandwidth exponent nu must lie in [0, 1), got {self.nu}")
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if not 0.0 <= self.ell <= 1.0:
            raise ValueError(f"ell must lie in [0, 1], got {self.ell}")

    # exponents used throughout the asymptotic formulas
    @property
    def r_den(self) -> float:
        """Exponent of the normalizing sums, d(1-ell)."""
        return self.dim * (1.0 - self.ell)

    @property
    def r_var(self) -> float:
        """Exponent entering the variance constant, d(1-2*ell)."""
        return self.dim * (1.0 - 2.0 * self.ell)

    @property
    def r_bias(self) -> float:
        """Exponent entering the bias constant, d(1-ell)+2."""
        return self.dim * (1.0 - self.ell) + 2.0

    def h(self, n):
        """Bandwidth at observation index ``n >= 1`` (scalar or array)."""
        n_arr = np.asarray(n)
        if np.any(n_arr < 1):
            raise ValueError(f"observation index must be >= 1, got {n}")
        out = self.c * np.asarray(n, dtype=float) ** (-self.nu)
        return float(out) if np.isscalar(n) or n_arr.ndim == 0 else out

    def b_nr(self, n: int, r: float) -> float:
        """Finite-n average ``(1/n) sum_{i<=n} (h_i/h_n)**r`` by direct summation."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        i = np.arange(1, n + 1, dtype=float)
        return float(np.sum((i / n) ** (-self.nu * r)) / n)

    def beta(self, r: float) -> float:
        """Limit of ``b_nr`` as n grows: ``1/(1 - nu*r)``."""
        a = self.nu * r
        if a >= 1.0:
            raise DivergenceError(
                f"beta_r diverges for nu*r = {a:.4g} >= 1 (nu={self.nu}, r={r})"
            )
        return 1.0 / (1.0 - a)

    def validate(self) -> ValidationReport:
        """Check the bandwidth assumptions; never raises."""
        rep = ValidationReport()
        d = self.dim
        rep.add(
            "h decreasing to zero",
            self.nu > 0,
            f"h_n = {self.c} * n^-{self.nu}" + ("" if self.nu > 0 else " is constant"),
        )
        rep.add(
            "n*h_n^(d+2) -> infinity",
            self.nu < 1.0 / (d + 2),
            f"requires nu < 1/(d+2) = {1.0/(d+2):.4g}, got nu = {self.nu}",
        )
        # Cesàro limits for every exponent the estimator consumes
        needed = {"d(1-ell)": self.r_den, "d(1-2ell)": self.r_var,
                  "d(1-ell)+2": self.r_bias, "d+2": float(d + 2)}
        finite = {name: self.nu * r < 1.0 for name, r in needed.items()}
        rep.add(
            "Cesàro limits finite for all needed exponents",
            all(finite.values()),
            ", ".join(f"{name}: nu*r = {self.nu * needed[name]:.4g}" for name in needed),
        )
        rep.add(
            "index-equivalence of the schedule",
            True,
            "power laws satisfy h_u ~ h_v whenever u ~ v (analytic; "
            "not needed when ell > 1/2)",
        )
        lo, hi = 1.0 / (d + 4), 1.0 / (d + 2)
        if lo < self.nu < hi:
            rep.note(
                f"bias-cancellation regime: nu = {self.nu} lies in "
                f"(1/(d+4), 1/(d+2)) = ({lo:.4g}, {hi:.4g}); n*h_n^(d+4) -> 0, "
                "so the centered statistic may drop the bias term"
            )
        if self.nu > 0:
            rep.note(
                "(ln n)^(1/theta) * h_n^p -> 0 for every p > 0 and theta > 0 "
                "(log factors lose to any polynomial decay)"
            )
        return rep


class RunningBandwidthSums:
    """Streaming partial sums of bandwidth powers.

    Tracks the estimator normalizer ``sum_i h_i^{d(1-ell)}`` with compensated
    accumulation, plus optional diagnostic sums ``sum_i h_i^r``.
    """

    def __init__(self, schedule: BandwidthSchedule, track: tuple[float, ...] = ()):
        self.schedule = schedule
        self.n = 0
        self.s_den = 0.0
        self._den_comp = 0.0
        self.s_r = {float(r): 0.0 for r in track}
        self._r_comp = {float(r): 0.0 for r in track}

    def update(self, count: int = 1) -> None:
        """Fold the next ``count`` observation indices into the sums."""
        if count < 1:
            raise ValueError("count must be >= 1")
        i = np.arange(self.n + 1, self.n + count + 1, dtype=float)
        h = self.schedule.h(i)
        self._add_den(float(np.sum(h ** self.schedule.r_den)))
        for r in self.s_r:
            y = float(np.sum(h ** r)) - self._r_comp[r]
            t = self.s_r[r] + y
            self._r_comp[r] = (t - self.s_r[r]) - y
            self.s_r[r] = t
        self.n += count

    def _add_den(self, value: float) -> None:
        y = value - self._den_comp
        t = self.s_den + y
        self._den_comp = (t - self.s_den) - y
        self.s_den = t

    def b_nr(self, r: float) -> float:
        """Diagnostic ``B_{n,r}`` from the tracked sum for exponent ``r``."""
        if float(r) not in self.s_r:
            raise KeyError(f"exponent {r} is not tracked")
        h_n = self.schedule.h(self.n)
        return self.s_r[float(r)] / (self.n * h_n ** r)
