"""ODE-integration oracle for Bessel J, independent of the series code.

The Bessel equation is integrated along the ray from a small radius to the
target argument.  The principal power t^v is factored out first,
J_v(t) = t^v u(t) with u'' + (2v + 1) u'/t + u = 0, because u is regular at
the origin and keeps the relative-error control meaningful near the start.
The seed is the two-term series of u, normalised with SciPy's gamma rather
than :mod:`.gamma`.
"""
from __future__ import annotations

import cmath

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import gamma as sp_gamma

from ..errors import OracleFailure
from .bessel import negative_integer

ORACLE_RTOL = 1e-13
DEFAULT_START_RADIUS = 1e-7
MAX_STEPS = 200_000


def integrate_ray(order: complex, arg: complex, start_radius: float, u0: complex, du0: complex):
    """Carry (u, du/dt) from t = start_radius * arg/|arg| out to t = arg."""
    order, arg = complex(order), complex(arg)
    radius = abs(arg)
    if radius == 0:
        raise OracleFailure("oracle needs a nonzero argument")
    if not 0 < start_radius < radius:
        raise OracleFailure(f"start radius {start_radius!r} must lie in (0, {radius:g})")
    direction = arg / radius
    k = 2.0 * order + 1.0

    def rhs(r, y):
        t = r * direction
        u, du = y
        return [direction * du, direction * (-k * du / t - u)]

    sol = solve_ivp(
        rhs,
        (start_radius, radius),
        np.array([u0, du0], dtype=complex),
        method="DOP853",
        rtol=ORACLE_RTOL,
        atol=1e-300,
    )
    if not sol.success or sol.nfev > MAX_STEPS * 12:
        raise OracleFailure(f"integration failed for order {order}: {sol.message}")
    return complex(sol.y[0, -1]), complex(sol.y[1, -1])


def bessel_oracle(order: complex, arg: complex, path_start_radius: float = DEFAULT_START_RADIUS):
    """(J_order(arg), J'_order(arg)) by integration.  Negative integer orders
    use J_{-n} = (-1)^n J_n."""
    order, arg = complex(order), complex(arg)
    n = negative_integer(order)
    if n is not None:
        v, d = bessel_oracle(n, arg, path_start_radius)
        return (-1) ** n * v, (-1) ** n * d
    c = 1.0 / (2.0**order * complex(sp_gamma(order + 1.0)))
    t0 = path_start_radius * arg / abs(arg)
    u0 = c * (1.0 - t0 * t0 / (4.0 * (order + 1.0)))
    du0 = -c * t0 / (2.0 * (order + 1.0))
    u, du = integrate_ray(order, arg, path_start_radius, u0, du0)
    p = cmath.exp(order * cmath.log(arg))
    return p * u, order * p / arg * u + p * du
