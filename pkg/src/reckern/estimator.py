"""The one-parameter family of recursive kernel regression estimators.

For a stream ``(X_i, Y_i)`` and a fixed evaluation grid, the state keeps the
running sums

    num(x)  = sum_i m(Y_i) * h_i^{-d*ell} * K((x - X_i)/h_i)
    den(x)  = sum_i           h_i^{-d*ell} * K((x - X_i)/h_i)
    s_den   = sum_i h_i^{d(1-ell)}

so that one new observation costs O(grid) work regardless of history.  The
ratios give the density-like estimate ``f = den/s_den``, the numerator
estimate ``phi = num/s_den`` and the regression estimate ``r = num/den``.
``ell = 0`` reproduces the classical recursive Nadaraya-Watson weighting and
``ell = 1`` the semi-recursive one; any value in [0, 1] interpolates.

A truncated numerator ``num_tr`` drops observations with ``|m(Y_i)|`` above
the slowly growing threshold ``b_i = (delta * ln i)^(1/theta)``, applied at
arrival time so the truncated sums stay computable online.  The first-index
degeneracy (ln 1 = 0) is avoided by clamping the index to 2.

Evaluating at points outside the grid requires replaying the stream; true
functional recursion would mean storing every observation, which is exactly
what the recursive form avoids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _accel
from .bandwidth import BandwidthSchedule
from .kernels import Kernel


class _UndefinedType:
    """Marker for ratios with an empty denominator (compact kernels far
    from all data).  Falsy, distinct from NaN, and a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Undefined"

    def __bool__(self):
        return False


UNDEFINED = _UndefinedType()

M_TRANSFORMS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "identity": lambda y: y,
    "square": lambda y: y * y,
}


def register_m(name: str, fn: Callable[[np.ndarray], np.ndarray]) -> None:
    """Register a custom response transformation selectable by name."""
    M_TRANSFORMS[name] = fn


@dataclass(frozen=True)
class Truncation:
    """Logarithmic truncation schedule ``b_i = (delta * ln max(i,2))^(1/theta)``."""

    delta: float
    theta: float

    def __post_init__(self):
        if not self.delta > 0 or not self.theta > 0:
            raise ValueError("truncation requires delta > 0 and theta > 0")

    def threshold(self, i) -> np.ndarray | float:
        i_arr = np.maximum(np.asarray(i, dtype=float), 2.0)
        out = (self.delta * np.log(i_arr)) ** (1.0 / self.theta)
        return float(out) if np.ndim(i) == 0 else out


@dataclass(frozen=True)
class EstimatorConfig:
    """Everything fixed before streaming starts."""

    kernel: Kernel
    schedule: BandwidthSchedule
    grid: np.ndarray
    truncation: Truncation | None = None
    m: str = "identity"

    def __post_init__(self):
        grid = np.atleast_2d(np.asarray(self.grid, dtype=float))
        if grid.shape[1] != self.kernel.dim and grid.shape[0] == self.kernel.dim:
            grid = grid.T
        object.__setattr__(self, "grid", np.ascontiguousarray(grid))
        if self.grid.size == 0:
            raise ValueError("evaluation grid must be non-empty")
        if self.grid.shape[1] != self.kernel.dim:
            raise ValueError(
                f"grid points have dimension {self.grid.shape[1]}, "
                f"kernel expects {self.kernel.dim}"
            )
        if self.kernel.dim != self.schedule.dim:
            raise ValueError("kernel and bandwidth schedule disagree on dimension")
        if len({tuple(p) for p in self.grid}) != len(self.grid):
            raise ValueError("grid points must be distinct")
        if self.m not in M_TRANSFORMS:
            raise ValueError(f"unknown response transformation {self.m!r}")

    @property
    def ell(self) -> float:
        return self.schedule.ell

    @property
    def dim(self) -> int:
        return self.kernel.dim

    def grid_index(self, x) -> int:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        matches = np.where(np.all(self.grid == x[None, :], axis=1))[0]
        if matches.size == 0:
            raise ValueError(f"point {x} is not on the evaluation grid")
        return int(matches[0])


class RecursiveKernelRegression:
    """Streaming state of the estimator family over a fixed grid."""

    def __init__(self, cfg: EstimatorConfig):
        self.cfg = cfg
        g = len(cfg.grid)
        self.n = 0
        self._num = np.zeros(g)
        self._num_comp = np.zeros(g)
        self._den = np.zeros(g)
        self._den_comp = np.zeros(g)
        self._num_tr = np.zeros(g)
        self._num_tr_comp = np.zeros(g)
        self.s_den = 0.0
        self._s_den_comp = 0.0
        self.trunc_exceed_count = 0

    # -- streaming ---------------------------------------------------------

    def update(self, x_obs, y_obs) -> "RecursiveKernelRegression":
        """Fold in a single observation; returns self."""
        x = np.asarray(x_obs, dtype=float).reshape(1, -1)
        y = np.asarray(y_obs, dtype=float).reshape(1)
        return self.update_many(x, y)

    def update_many(self, xs, ys) -> "RecursiveKernelRegression":
        """Fold in a block of observations in stream order; returns self.

        Equivalent to repeated ``update`` calls up to compensated-summation
        reassociation (well inside the batch-equivalence contract).
        """
        xs = np.ascontiguousarray(np.asarray(xs, dtype=float))
        if xs.ndim == 1:
            xs = xs.reshape(-1, 1) if self.cfg.dim == 1 else xs.reshape(1, -1)
        ys = np.asarray(ys, dtype=float).reshape(-1)
        if xs.shape[1] != self.cfg.dim:
            raise ValueError(
                f"observations have dimension {xs.shape[1]}, expected {self.cfg.dim}"
            )
        if xs.shape[0] != ys.shape[0]:
            raise ValueError("xs and ys lengths differ")
        count = xs.shape[0]
        if count == 0:
            return self

        sched = self.cfg.schedule
        idx = np.arange(self.n + 1, self.n + count + 1, dtype=float)
        h = sched.h(idx)
        d = self.cfg.dim
        w_kern = np.ascontiguousarray(h ** (-d * sched.ell))
        ms = np.asarray(M_TRANSFORMS[self.cfg.m](ys), dtype=float)
        wm = np.ascontiguousarray(ms * w_kern)

        trunc = self.cfg.truncation is not None
        if trunc:
            keep = (np.abs(ms) <= self.cfg.truncation.threshold(idx)).astype(float)
            self.trunc_exceed_count += int(count - keep.sum())
        else:
            keep = np.ones(0)

        _accel.accumulate(
            self.cfg.kernel.family_id, self.cfg.grid, xs,
            np.ascontiguousarray(h), w_kern, wm, np.ascontiguousarray(keep),
            self._num, self._num_comp, self._den, self._den_comp,
            self._num_tr, self._num_tr_comp, trunc,
        )

        # normalizer: chunk total folded in with the same compensation scheme
        y_add = float(np.sum(h ** sched.r_den)) - self._s_den_comp
        t = self.s_den + y_add
        self._s_den_comp = (t - self.s_den) - y_add
        self.s_den = t
        self.n += count
        return self

    # -- evaluation --------------------------------------------------------

    def _require_started(self):
        if self.n < 1:
            raise ValueError("no observations streamed yet")

    def f_hat(self, x) -> float:
        """Density-like estimate at a grid point (0 where no mass arrived)."""
        self._require_started()
        return float(self._den[self.cfg.grid_index(x)] / self.s_den)

    def phi_hat(self, x) -> float:
        self._require_started()
        return float(self._num[self.cfg.grid_index(x)] / self.s_den)

    def phi_tilde(self, x) -> float:
        self._require_started()
        if self.cfg.truncation is None:
            raise ValueError("truncation is not configured for this estimator")
        return float(self._num_tr[self.cfg.grid_index(x)] / self.s_den)

    def r_hat(self, x, truncated: bool = False):
        """Regression estimate at a grid point, or UNDEFINED where den = 0."""
        self._require_started()
        g = self.cfg.grid_index(x)
        if self._den[g] == 0.0:
            return UNDEFINED
        if truncated:
            if self.cfg.truncation is None:
                raise ValueError("truncation is not configured for this estimator")
            return float(self._num_tr[g] / self._den[g])
        return float(self._num[g] / self._den[g])

    # -- vectorized access for the replication harness ----------------------

    def values(self) -> dict[str, np.ndarray]:
        """Per-grid-point arrays: f, phi, phi_tilde (NaN if untracked),
        r (NaN where undefined) and the defined mask."""
        self._require_started()
        defined = self._den > 0.0
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.where(defined, self._num / np.where(defined, self._den, 1.0), np.nan)
        phit = (self._num_tr / self.s_den if self.cfg.truncation is not None
                else np.full(len(self.cfg.grid), np.nan))
        return {
            "f": self._den / self.s_den,
            "phi": self._num / self.s_den,
            "phi_tilde": phit,
            "r": r,
            "defined": defined,
        }

    def snapshot_rows(self) -> list[list]:
        """Rows (x_1..x_d, f_hat, r_hat, phi_hat, n); r_hat empty if undefined."""
        vals = self.values()
        rows = []
        for g, point in enumerate(self.cfg.grid):
            r = vals["r"][g] if vals["defined"][g] else ""
            rows.append([*point, vals["f"][g], r, vals["phi"][g], self.n])
        return rows


def batch_sums(cfg: EstimatorConfig, xs: np.ndarray, ys: np.ndarray,
               paper_truncation: bool = False):
    """Direct (non-streaming) evaluation of the defining sums.

    Used as the cross-check oracle for the recursion and to realize the
    fixed-final-threshold truncation variant, where ``b_n`` of the *last*
    index is applied to every observation.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[1] != cfg.dim:
        xs = xs.T
    ys = np.asarray(ys, dtype=float).reshape(-1)
    n = xs.shape[0]
    sched = cfg.schedule
    idx = np.arange(1, n + 1, dtype=float)
    h = sched.h(idx)
    w = h ** (-cfg.dim * sched.ell)
    ms = np.asarray(M_TRANSFORMS[cfg.m](ys), dtype=float)
    if cfg.truncation is not None:
        bounds = (cfg.truncation.threshold(float(n)) if paper_truncation
                  else cfg.truncation.threshold(idx))
        keep = np.abs(ms) <= bounds
    else:
        keep = np.ones(n, dtype=bool)

    num = np.empty(len(cfg.grid))
    den = np.empty(len(cfg.grid))
    num_tr = np.empty(len(cfg.grid))
    for g, point in enumerate(cfg.grid):
        k = cfg.kernel.eval_many((point[None, :] - xs) / h[:, None])
        num[g] = math.fsum(ms * w * k)
        den[g] = math.fsum(w * k)
        num_tr[g] = math.fsum(np.where(keep, ms, 0.0) * w * k)
    s_den = math.fsum(h ** sched.r_den)
    return num, den, num_tr, s_den
