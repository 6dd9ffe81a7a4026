# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Bessel power-series kernel; mirrors ``_kernels_py.series_sum``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, fabs, fmax, sqrt

cdef extern from "complex.h":
    double cabs(double complex)


def series_sum(lead, w, long k0, double complex nu1, double rtol, long max_terms):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] lead_a = np.ascontiguousarray(lead, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] w_a = np.ascontiguousarray(w, dtype=np.complex128)
    cdef Py_ssize_t n = lead_a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] total = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] used = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tail = np.empty(n, dtype=np.float64)
    # per-step quantities shared by every element (denom holds reciprocals)
    cdef long steps = max_terms - 1 if max_terms > 1 else 0
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] denom = np.empty(steps, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] next_abs = np.empty(steps, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] next_pos = np.empty(steps, dtype=np.uint8)
    cdef Py_ssize_t i
    cdef long m
    cdef double tr, ti, sr, si, wr, wi, fr, fi, xr, xi
    cdef double aw, ratio, at, ms, bound
    cdef bint small, small_prev
    cdef double SQRT2 = sqrt(2.0)
    cdef double complex d
    for m in range(steps):
        d = 1.0 / ((k0 + m + 1) * (nu1 + m))
        denom[m] = d
        next_abs[m] = cabs((k0 + m + 2) * (nu1 + m + 1))
        next_pos[m] = (nu1 + m + 1).real > 0
    for i in range(n):
        # complex arithmetic spelled out in reals: avoids the C99 __muldc3 call
        tr = lead_a[i].real
        ti = lead_a[i].imag
        sr = tr
        si = ti
        wr = w_a[i].real
        wi = w_a[i].imag
        aw = cabs(w_a[i])
        small_prev = False
        used[i] = 1
        tail[i] = INFINITY
        for m in range(steps):
            fr = wr * denom[m].real - wi * denom[m].imag
            fi = wr * denom[m].imag + wi * denom[m].real
            xr = tr * fr - ti * fi
            xi = tr * fi + ti * fr
            tr = xr
            ti = xi
            sr = sr + tr
            si = si + ti
            used[i] += 1
            at = fmax(fabs(tr), fabs(ti))
            ms = fmax(fabs(sr), fabs(si))
            small = at <= rtol * ms
            ratio = aw / next_abs[m]
            if small and small_prev and ratio < 1.0 and next_pos[m]:
                if ms != 0:
                    bound = SQRT2 * at * ratio / (1.0 - (ratio if ratio < 0.5 else 0.5)) / ms
                else:
                    bound = 0.0
                tail[i] = bound
                break
            small_prev = small
        total[i] = sr + 1j * si
    return total, used, tail
