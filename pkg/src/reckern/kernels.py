"""Smoothing kernels on R^d with the integral constants used by the theory.

Multivariate kernels are products of the univariate family, so the second
moment matrix is diagonal and all constants are closed-form.  Both families
are bounded, even, nonnegative and integrate to one; ``|u|^d K(u) -> 0`` at
infinity holds by construction and is not checked at runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GAUSSIAN = "gaussian"
EPANECHNIKOV = "epanechnikov"
FAMILIES = (GAUSSIAN, EPANECHNIKOV)

# family ids shared with the accumulation backends
_FAMILY_ID = {GAUSSIAN: 0, EPANECHNIKOV: 1}

# univariate constants: integral of K^2 and second moment
_L2_1D = {GAUSSIAN: 1.0 / (2.0 * math.sqrt(math.pi)), EPANECHNIKOV: 0.6}
_M2_1D = {GAUSSIAN: 1.0, EPANECHNIKOV: 0.2}


@dataclass(frozen=True)
class Kernel:
    """Product kernel on R^d.

    Attributes
    ----------
    dim : int
        Dimension d of the covariate space.
    family : str
        ``"gaussian"`` or ``"epanechnikov"``.
    l2_norm_sq : float
        Integral of K^2 over R^d.
    second_moment : ndarray, shape (d, d)
        Matrix of integrals of ``v_i v_j K(v)``; diagonal for product kernels.
    support_radius : float
        Euclidean radius outside which K vanishes exactly (``inf`` for the
        Gaussian; no tail truncation is applied).
    """

    dim: int
    family: str
    l2_norm_sq: float = field(init=False)
    second_moment: np.ndarray = field(init=False)
    support_radius: float = field(init=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"kernel dimension must be >= 1, got {self.dim}")
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown kernel family {self.family!r}; expected one of {FAMILIES}"
            )
        object.__setattr__(self, "l2_norm_sq", _L2_1D[self.family] ** self.dim)
        object.__setattr__(
            self, "second_moment", _M2_1D[self.family] * np.eye(self.dim)
        )
        radius = math.inf if self.family == GAUSSIAN else math.sqrt(self.dim)
        object.__setattr__(self, "support_radius", radius)

    @property
    def family_id(self) -> int:
        return _FAMILY_ID[self.family]

    def __call__(self, u) -> float:
        """Evaluate K at a single point ``u`` of length ``dim``."""
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim,) and not (self.dim == 1 and u.shape == ()):
            raise ValueError(f"expected a point of length {self.dim}, got shape {u.shape}")
        u = np.atleast_1d(u)
        if self.family == GAUSSIAN:
            return float((2.0 * math.pi) ** (-0.5 * self.dim)
                         * math.exp(-0.5 * float(u @ u)))
        inside = 1.0 - u * u
        if np.any(inside <= 0.0):
            return 0.0
        return float(np.prod(0.75 * inside))

    def eval_many(self, U: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over rows of ``U`` with shape (m, dim)."""
        U = np.asarray(U, dtype=float)
        if U.ndim != 2 or U.shape[1] != self.dim:
            raise ValueError(f"expected shape (m, {self.dim}), got {U.shape}")
        if self.family == GAUSSIAN:
            norm = (2.0 * math.pi) ** (-0.5 * self.dim)
            return norm * np.exp(-0.5 * np.einsum("ij,ij->i", U, U))
        inside = np.clip(1.0 - U * U, 0.0, None)
        return np.prod(0.75 * inside, axis=1)

    def constants(self) -> tuple[float, np.ndarray]:
        """Return ``(l2_norm_sq, second_moment)``."""
        return self.l2_norm_sq, self.second_moment


def make_kernel(family: str, dim: int) -> Kernel:
    """Construct a kernel by family name, as used in experiment configs."""
    return Kernel(dim=dim, family=family.strip().lower())
