# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled accumulation core.

Per grid point the observations are folded in stream order with Kahan
compensation held in registers (the memory-indirect formulation stalls on
the store-to-load dependency chain and is ~40x slower).  Gaussian exponent
arguments are assembled in C and evaluated through NumPy's vectorized exp
in blocks; the Epanechnikov family needs no transcendentals and runs as a
pure C loop with support skipping.  Kernel values below exp(-690) ~ 1e-300
are forced to exact zero.
"""

from libc.math cimport INFINITY, M_PI

import numpy as np

DEF ARG_FLOOR = -690.0


def accumulate(int family,
               double[:, ::1] grid,
               double[:, ::1] xs,
               double[::1] h,
               double[::1] w_kern,
               double[::1] wm,
               double[::1] keep,
               double[::1] num, double[::1] num_comp,
               double[::1] den, double[::1] den_comp,
               double[::1] num_tr, double[::1] num_tr_comp,
               bint truncate):
    """Stream ``xs`` through the sums in order.

    ``w_kern[i]`` is ``h_i**(-d*ell)``; ``wm[i] = m(y_i) * w_kern[i]``;
    ``keep[i]`` is 1.0 where ``|m(y_i)|`` is within the truncation bound.
    """
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t d = xs.shape[1]
    cdef Py_ssize_t g_count = grid.shape[0]
    cdef Py_ssize_t block = 8192 if n > 8192 else n
    cdef Py_ssize_t start = 0
    cdef Py_ssize_t stop, rows, i, g, j
    cdef double ss, t, kv, inv_h, v, y
    cdef double a_den, c_den, a_num, c_num, a_nt, c_nt
    cdef double gauss_norm = (2.0 * M_PI) ** (-0.5 * d)
    cdef double[:, ::1] k_view

    if family == 0:
        buf = np.empty((block, g_count))
        k_view = buf
        while start < n:
            stop = start + block
            if stop > n:
                stop = n
            rows = stop - start
            with nogil:
                for i in range(rows):
                    inv_h = 1.0 / h[start + i]
                    for g in range(g_count):
                        ss = 0.0
                        for j in range(d):
                            t = (grid[g, j] - xs[start + i, j]) * inv_h
                            ss += t * t
                        ss = -0.5 * ss
                        k_view[i, g] = ss if ss > ARG_FLOOR else -INFINITY
            np.exp(buf[:rows], out=buf[:rows])
            with nogil:
                for g in range(g_count):
                    a_den = den[g]; c_den = den_comp[g]
                    a_num = num[g]; c_num = num_comp[g]
                    a_nt = num_tr[g]; c_nt = num_tr_comp[g]
                    for i in range(rows):
                        kv = k_view[i, g]
                        if kv != 0.0:
                            kv *= gauss_norm
                            v = w_kern[start + i] * kv
                            y = v - c_den; t = a_den + y
                            c_den = (t - a_den) - y; a_den = t
                            v = wm[start + i] * kv
                            y = v - c_num; t = a_num + y
                            c_num = (t - a_num) - y; a_num = t
                            if truncate and keep[start + i] != 0.0:
                                y = v - c_nt; t = a_nt + y
                                c_nt = (t - a_nt) - y; a_nt = t
                    den[g] = a_den; den_comp[g] = c_den
                    num[g] = a_num; num_comp[g] = c_num
                    num_tr[g] = a_nt; num_tr_comp[g] = c_nt
            start = stop
    else:
        with nogil:
            for g in range(g_count):
                a_den = den[g]; c_den = den_comp[g]
                a_num = num[g]; c_num = num_comp[g]
                a_nt = num_tr[g]; c_nt = num_tr_comp[g]
                for i in range(n):
                    inv_h = 1.0 / h[i]
                    kv = 1.0
                    for j in range(d):
                        t = (grid[g, j] - xs[i, j]) * inv_h
                        if t <= -1.0 or t >= 1.0:
                            kv = 0.0
                            break
                        kv *= 0.75 * (1.0 - t * t)
                    if kv != 0.0:
                        v = w_kern[i] * kv
                        y = v - c_den; t = a_den + y
                        c_den = (t - a_den) - y; a_den = t
                        v = wm[i] * kv
                        y = v - c_num; t = a_num + y
                        c_num = (t - a_num) - y; a_num = t
                        if truncate and keep[i] != 0.0:
                            y = v - c_nt; t = a_nt + y
                            c_nt = (t - a_nt) - y; a_nt = t
                den[g] = a_den; den_comp[g] = c_den
                num[g] = a_num; num_comp[g] = c_num
                num_tr[g] = a_nt; num_tr_comp[g] = c_nt
