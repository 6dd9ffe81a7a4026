"""Complex gamma function: Lanczos (g = 7, n = 9) plus reflection."""
from __future__ import annotations

import cmath
import math

from ..errors import PoleError

_G = 7.0
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _nonpositive_integer(w: complex) -> bool:
    return w.imag == 0.0 and w.real <= 0.0 and w.real == math.floor(w.real)


def sinpi(w: complex) -> complex:
    """sin(pi w) with the integer part removed first, so it stays accurate
    next to the integers."""
    w = complex(w)
    n = round(w.real)
    r = cmath.sin(cmath.pi * (w - n))
    return -r if n % 2 else r


def _loggamma_right(w: complex) -> complex:
    # valid for Re w >= 0.5
    w = w - 1.0
    acc = _COEF[0]
    for i, c in enumerate(_COEF[1:], start=1):
        acc += c / (w + i)
    t = w + _G + 0.5
    return _HALF_LOG_2PI + (w + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma(w: complex) -> complex:
    """Gamma(w) for complex w; raises :class:`PoleError` at 0, -1, -2, ..."""
    w = complex(w)
    if _nonpositive_integer(w):
        raise PoleError(f"Gamma has a pole at {w.real:g}")
    if w.imag == 0.0 and w.real == math.floor(w.real) and w.real <= 171:
        return complex(math.factorial(int(w.real) - 1))
    if w.real < 0.5:
        return cmath.pi / (sinpi(w) * cmath.exp(_loggamma_right(1.0 - w)))
    return cmath.exp(_loggamma_right(w))


def rgamma(w: complex) -> complex:
    """1/Gamma(w), entire; exactly zero at the poles of Gamma."""
    w = complex(w)
    if _nonpositive_integer(w):
        return 0j
    if w.real < 0.5:
        return sinpi(w) * cmath.exp(_loggamma_right(1.0 - w)) / cmath.pi
    return cmath.exp(-_loggamma_right(w))
