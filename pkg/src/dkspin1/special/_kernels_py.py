"""Pure-NumPy fallback for the Bessel power-series kernel.

Same contract as the compiled ``_kernels`` module; see :func:`series_sum`.
"""
from __future__ import annotations

import numpy as np

_SQRT2 = np.sqrt(2.0)


def _mag(z):
    # max-norm: within sqrt(2) of |z|; the compiled kernel uses the same
    return np.maximum(np.abs(z.real), np.abs(z.imag))


def series_sum(lead, w, k0, nu1, rtol, max_terms):
    """Sum t_0 + t_1 + ... with t_{m+1} = t_m * w / ((k0 + m + 1) * (nu1 + m)).

    ``lead`` holds t_0 per element, ``w`` = -(x/2)^2 per element.  Stops an
    element once two consecutive terms fall below ``rtol`` times the running
    sum (max-norm) inside the monotone-decay regime.  Returns (sums, terms_used,
    tail_estimate) where tail_estimate bounds the neglected tail relative to
    the sum (inf when the cap was hit first).
    """
    lead = np.asarray(lead, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    n = lead.shape[0]
    total = lead.copy()
    term = lead.copy()
    small_prev = np.zeros(n, dtype=bool)
    done = np.zeros(n, dtype=bool)
    used = np.ones(n, dtype=np.int64)
    tail = np.full(n, np.inf)
    aw = np.abs(w)
    for m in range(max_terms - 1):
        active = ~done
        if not active.any():
            break
        inv = 1.0 / ((k0 + m + 1) * (nu1 + m))
        term = np.where(active, term * (w * inv), term)
        total = np.where(active, total + term, total)
        used[active] += 1
        # ratio of the next term to this one; < 1 once the series is decaying
        ratio = aw / abs((k0 + m + 2) * (nu1 + m + 1))
        decaying = (ratio < 1.0) & ((nu1 + m + 1).real > 0)
        at = _mag(term)
        small = at <= rtol * _mag(total)
        stop = active & decaying & small & small_prev
        with np.errstate(divide="ignore", invalid="ignore"):
            bound = np.where(total != 0, _SQRT2 * at * ratio / (1.0 - np.minimum(ratio, 0.5)) / _mag(total), 0.0)
        tail = np.where(stop, bound, tail)
        done |= stop
        small_prev = small
    return total, used, tail
