"""Bessel J of complex order and complex argument by power series."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from ..errors import PoleError, SeriesRangeError
from . import _backend
from .gamma import rgamma, sinpi

SERIES_RTOL = 1e-16
MAX_TERMS = 200
MAX_ARG = 30.0
TRUNCATION_LIMIT = 1e-12
INTEGER_SNAP = 1e-15


@dataclass(frozen=True)
class BesselEval:
    order: complex
    argument: complex
    value: complex
    derivative: complex
    terms_used: int
    truncation_estimate: float


def negative_integer(order: complex) -> int | None:
    """Return n if order is -n for an integer n >= 1, else None.

    Orders within ``INTEGER_SNAP`` of -n count as -n: J is smooth in the
    order, so the error is O(distance), below double precision, while the
    unsnapped series would divide two underflowing numbers.
    """
    order = complex(order)
    n = round(order.real)
    if n < 0 and abs(order - n) <= INTEGER_SNAP:
        return -n
    return None


def _at_origin(order: complex) -> complex:
    if order == 0:
        return 1.0 + 0j
    if order.real > 0 or negative_integer(order) is not None:
        return 0j
    raise PoleError(f"J_{order} is singular at the origin")


def jv_info(order: complex, x, kernels=None):
    """Vectorised J_order(x) -> (values, terms_used, truncation_estimate).

    Raises :class:`SeriesRangeError` if any |x| exceeds ``MAX_ARG`` or the
    series fails to reach ``TRUNCATION_LIMIT``.
    """
    order = complex(order)
    x = np.atleast_1d(np.asarray(x, dtype=np.complex128))
    if x.ndim != 1:
        raise ValueError("x must be scalar or 1-d")
    big = np.abs(x) > MAX_ARG
    if big.any():
        raise SeriesRangeError(
            f"|arg| = {np.abs(x).max():.6g} exceeds the series cap {MAX_ARG:g}"
        )
    kernels = kernels or _backend.kernels
    out = np.empty_like(x)
    used = np.zeros(x.shape, dtype=np.int64)
    trunc = np.zeros(x.shape)
    zero = x == 0
    if zero.any():
        out[zero] = _at_origin(order)
        used[zero] = 1
    nz = ~zero
    if nz.any():
        n = negative_integer(order)
        k0 = n if n is not None else 0
        half = x[nz] / 2.0
        coef = (-1) ** k0 * rgamma(k0 + 1) * rgamma(order + k0 + 1)
        lead = coef * np.exp((2 * k0 + order) * np.log(half))
        vals, u, tail = kernels.series_sum(
            lead, -half * half, k0, order + k0 + 1, SERIES_RTOL, MAX_TERMS
        )
        out[nz], used[nz], trunc[nz] = vals, u, tail
    if np.any(trunc > TRUNCATION_LIMIT):
        i = int(np.argmax(trunc))
        raise SeriesRangeError(
            f"series for J_{order}({x[i]}) did not converge "
            f"(tail estimate {trunc[i]:.3g} after {used[i]} terms)"
        )
    return out, used, trunc


def jv(order: complex, x) -> np.ndarray:
    return jv_info(order, x)[0]


def jvp(order: complex, x) -> np.ndarray:
    """dJ/dx via J' = (J_{order-1} - J_{order+1}) / 2."""
    order = complex(order)
    return 0.5 * (jv(order - 1, x) - jv(order + 1, x))


def jvpp(order: complex, x) -> np.ndarray:
    """Second derivative from the derivative identity applied twice."""
    order = complex(order)
    return 0.25 * (jv(order - 2, x) - 2.0 * jv(order, x) + jv(order + 2, x))


def bessel_j(order: complex, arg: complex) -> BesselEval:
    order, arg = complex(order), complex(arg)
    vals, used, trunc = jv_info(order, [arg])
    return BesselEval(
        order=order,
        argument=arg,
        value=complex(vals[0]),
        derivative=complex(jvp(order, [arg])[0]),
        terms_used=int(used[0]),
        truncation_estimate=float(trunc[0]),
    )


def wronskian_expected(order: complex, arg: complex) -> complex:
    """J_v J'_{-v} - J_{-v} J'_v = -2 sin(v pi) / (pi arg)."""
    return -2.0 * sinpi(order) / (cmath.pi * complex(arg))
