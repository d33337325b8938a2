"""NumPy accumulation core: chunked, mathematically identical to the
compiled loop.

Per-observation contributions within a chunk are formed as a (chunk, grid)
matrix and reduced with NumPy's pairwise summation; chunk totals are folded
into the running sums with Kahan compensation.  Both cores therefore meet
the compensated-summation accuracy contract; they agree with each other to
floating-point reassociation error, not bit-for-bit.
"""

from __future__ import annotations

import math

import numpy as np

_CHUNK = 4096
# kernel values below exp(-690) ~ 1e-300 are forced to exact zero, matching
# the compiled core and keeping subnormal slow paths out of the arithmetic
_ARG_FLOOR = -690.0


def _kadd(acc: np.ndarray, comp: np.ndarray, values: np.ndarray) -> None:
    y = values - comp
    t = acc + y
    comp[...] = (t - acc) - y
    acc[...] = t


def accumulate(family, grid, xs, h, w_kern, wm, keep,
               num, num_comp, den, den_comp, num_tr, num_tr_comp,
               truncate):
    n, d = xs.shape
    for s in range(0, n, _CHUNK):
        e = min(s + _CHUNK, n)
        diff = (grid[None, :, :] - xs[s:e, None, :]) / h[s:e, None, None]
        if family == 0:
            arg = -0.5 * np.einsum("igj,igj->ig", diff, diff)
            k = ((2.0 * math.pi) ** (-0.5 * d)
                 * np.exp(np.where(arg > _ARG_FLOOR, arg, -np.inf)))
        else:
            inside = np.clip(1.0 - diff * diff, 0.0, None)
            k = np.prod(0.75 * inside, axis=2)
        _kadd(den, den_comp, (w_kern[s:e, None] * k).sum(axis=0))
        _kadd(num, num_comp, (wm[s:e, None] * k).sum(axis=0))
        if truncate:
            _kadd(num_tr, num_tr_comp,
                  ((wm[s:e] * keep[s:e])[:, None] * k).sum(axis=0))
