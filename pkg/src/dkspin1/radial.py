"""Radial reduction: second-order equations in z, the Bessel variable
Z = i s e^z (s = sqrt(a^2 + b^2)), and the algebraic relations tying the
three components of a helicity triple together.

Every profile built here has the shape P(Z) J_v(Z) + Q(Z) J_v'(Z) with
polynomial P, Q (:class:`BesselForm`), which keeps all z-derivatives
analytic: d/dz = Z d/dZ and J'' is eliminated with Bessel's equation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    BranchUnavailableError,
    DegenerateMomentumError,
    InconsistentQuantumNumbersError,
    InvalidInputError,
    SingularDenominatorError,
)
from .special import jv, jvp, jvpp
from .wave_system import GAMMA, FieldComponents, QuantumNumbers

Which = Literal["H1", "H3", "Phi0"]
SIGMA_TOL = 1e-12


def _poly(*coef) -> Polynomial:
    return Polynomial(np.asarray(coef, dtype=complex))


ZPOLY = _poly(0, 1)


@dataclass(frozen=True)
class BesselForm:
    """P(Z) J_order(Z) + Q(Z) J'_order(Z); Q must vanish at Z = 0."""

    order: complex
    P: Polynomial
    Q: Polynomial

    @classmethod
    def zero(cls, order: complex) -> "BesselForm":
        return cls(complex(order), _poly(0), _poly(0))

    def __add__(self, other: "BesselForm") -> "BesselForm":
        if other.order != self.order:
            raise ValueError("cannot add forms of different order")
        return BesselForm(self.order, self.P + other.P, self.Q + other.Q)

    def __sub__(self, other: "BesselForm") -> "BesselForm":
        return self + other * -1.0

    def __mul__(self, c) -> "BesselForm":
        """Multiply by a scalar or a Polynomial in Z."""
        return BesselForm(self.order, self.P * c, self.Q * c)

    __rmul__ = __mul__

    def dz(self) -> "BesselForm":
        """d/dz = Z d/dZ, using J'' = -J'/Z - (1 - order^2/Z^2) J."""
        P, Q, nu2 = self.P, self.Q, self.order**2
        q0 = Q.coef[0]
        if q0 != 0:
            raise ValueError("Q(0) != 0: z-derivative leaves the polynomial class")
        q_over_z = Polynomial(Q.coef[1:]) if len(Q.coef) > 1 else _poly(0)
        newP = ZPOLY * P.deriv() - ZPOLY * Q + nu2 * q_over_z
        newQ = ZPOLY * (P + Q.deriv()) - Q
        return BesselForm(self.order, newP, newQ)

    def evaluate(self, Z, j=None, jp=None) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        j = jv(self.order, Z) if j is None else j
        jp = jvp(self.order, Z) if jp is None else jp
        return self.P(Z) * j + self.Q(Z) * jp


@dataclass(frozen=True)
class FormSum:
    """Sum of BesselForms of distinct orders; ``primary`` is the first order."""

    terms: tuple

    @classmethod
    def of(cls, *forms: BesselForm) -> "FormSum":
        return cls(()) + cls(tuple(forms))

    @property
    def primary(self) -> complex:
        return self.terms[0].order

    @property
    def orders(self) -> tuple:
        return tuple(t.order for t in self.terms)

    def __add__(self, other) -> "FormSum":
        if isinstance(other, BesselForm):
            other = FormSum((other,))
        merged = list(self.terms)
        for t in other.terms:
            for i, m in enumerate(merged):
                if m.order == t.order:
                    merged[i] = m + t
                    break
            else:
                merged.append(t)
        return FormSum(tuple(merged))

    def __mul__(self, c) -> "FormSum":
        return FormSum(tuple(t * c for t in self.terms))

    __rmul__ = __mul__

    def dz(self) -> "FormSum":
        return FormSum(tuple(t.dz() for t in self.terms))

    def evaluate(self, Z, cache: dict | None = None) -> np.ndarray:
        """``cache`` maps order -> (J, J') on this Z and is filled as needed."""
        Z = np.asarray(Z, dtype=complex)
        cache = {} if cache is None else cache
        out = np.zeros(Z.shape, dtype=complex)
        for t in self.terms:
            if t.order not in cache:
                cache[t.order] = (jv(t.order, Z), jvp(t.order, Z))
            out += t.evaluate(Z, *cache[t.order])
        return out


@dataclass(frozen=True)
class SecondOrderODE:
    """u'' + p u' - [e^{2z} s^2 - c0] u = 0."""

    which: str
    p: float
    c0: complex
    s2: float

    def q(self, z) -> np.ndarray:
        return -(np.exp(2 * np.asarray(z)) * self.s2 - self.c0)

    def residual(self, z, u, du, d2u) -> np.ndarray:
        return d2u + self.p * du + self.q(z) * u

    def relative_residual(self, z, u, du, d2u, magnitudes=None) -> np.ndarray:
        """|residual| over the largest of the three term magnitudes.

        ``magnitudes`` (|u|, |u'|, |u''| bounds, e.g. sums of absolute values
        of the pieces u was assembled from) replaces the computed values in
        the scale, giving a componentwise backward error.
        """
        mu, mdu, md2u = (np.abs(u), np.abs(du), np.abs(d2u)) if magnitudes is None else magnitudes
        terms = np.array([md2u, np.abs(self.p) * mdu, np.abs(self.q(z)) * mu])
        scale = terms.max(axis=0)
        return np.abs(self.residual(z, u, du, d2u)) / np.where(scale > 0, scale, 1.0)

    @property
    def power(self) -> float:
        """m in u = Z^m J_k(Z)."""
        return -self.p / 2.0

    @property
    def order_squared(self) -> complex:
        return self.p**2 / 4.0 - self.c0


def radial_ode(q: QuantumNumbers, which: Which) -> SecondOrderODE:
    s2 = q.a**2 + q.b**2
    sig = q.sigma
    if which == "H1":
        return SecondOrderODE("H1", -4.0, 4 + (1j + sig) ** 2, s2)
    if which == "H3":
        return SecondOrderODE("H3", -4.0, 4 + (1j - sig) ** 2, s2)
    if which == "Phi0":
        return SecondOrderODE("Phi0", -2.0, complex(q.epsilon**2 - q.M**2), s2)
    raise InvalidInputError(f"unknown radial equation {which!r}")


def require_transverse(q: QuantumNumbers) -> float:
    if q.a == 0 and q.b == 0:
        raise DegenerateMomentumError("a = b = 0: transverse momentum vanishes")
    return q.s


def substitute_Z(q: QuantumNumbers, z):
    """Z = i sqrt(a^2 + b^2) e^z (on the positive imaginary axis)."""
    s = require_transverse(q)
    out = 1j * s * np.exp(np.asarray(z, dtype=float))
    return complex(out) if out.ndim == 0 else out


def ez_poly(q: QuantumNumbers) -> Polynomial:
    """e^z as a polynomial in Z: e^z = Z / (i s)."""
    return ZPOLY * (1.0 / (1j * require_transverse(q)))


def is_nonnegative_integer(x: complex, tol: float = 0.0) -> bool:
    x = complex(x)
    return abs(x.imag) <= tol and x.real >= -tol and abs(x.real - round(x.real)) <= tol


def signed_order(order: complex, branch: int) -> complex:
    if branch not in (1, -1):
        raise InvalidInputError(f"Bessel branch must be +1 or -1, got {branch!r}")
    if branch == -1 and is_nonnegative_integer(order):
        raise BranchUnavailableError(
            f"order {order} is an integer: J_(-{order.real:g}) = +-J_{order.real:g}, "
            "no independent second solution among J_(+-order)"
        )
    return branch * order


def mu_order(sigma: complex) -> complex:
    return 1.0 - 1j * complex(sigma)


def nu_order(sigma: complex) -> complex:
    return 1.0 + 1j * complex(sigma)


def phi0_order(q: QuantumNumbers) -> complex:
    """k with k^2 = 1 - (eps^2 - M^2), principal root."""
    return cmath.sqrt(radial_ode(q, "Phi0").order_squared)


def h1_form(q: QuantumNumbers, branch: int = 1) -> BesselForm:
    """H1 = Z^2 J_{+-mu}(Z), mu = 1 - i sigma."""
    require_transverse(q)
    return BesselForm(signed_order(mu_order(q.sigma), branch), ZPOLY**2, _poly(0))


def h3_form(q: QuantumNumbers, branch: int = 1) -> BesselForm:
    """H3 = Z^2 J_{+-nu}(Z), nu = 1 + i sigma, solving the H3 equation directly."""
    require_transverse(q)
    return BesselForm(signed_order(nu_order(q.sigma), branch), ZPOLY**2, _poly(0))


def companion_h3_form(q: QuantumNumbers, h1: BesselForm) -> BesselForm:
    """Z^2 h3 = ((a+ib)/(a-ib)) [-2i sigma (Z d/dZ + 1 - i sigma) - Z^2] h1.

    ``h1`` is the bare Bessel function (P = 1, Q = 0); the result is H3 = Z^2 h3.
    """
    if q.km == 0:
        raise SingularDenominatorError("a - ib = 0")
    kappa = q.kp / q.km
    sig = q.sigma
    theta = h1.dz()  # Z d/dZ h1
    return (theta * (-2j * sig) + h1 * (-2j * sig * (1 - 1j * sig)) + h1 * (-(ZPOLY**2))) * kappa


def companion_h1_values(q: QuantumNumbers, H3: np.ndarray, dH3: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Inverse relation: Z^2 h1 = ((a-ib)/(a+ib)) [2i sigma (Z d/dZ + 1 + i sigma) - Z^2] h3.

    Takes H3 = Z^2 h3 and dH3/dz; returns Z^2 h1.  With h3 = H3 Z^-2,
    Z d/dZ h3 = Z^-2 (dH3/dz - 2 H3).
    """
    if q.kp == 0:
        raise SingularDenominatorError("a + ib = 0")
    sig = q.sigma
    bracket = 2j * sig * (dH3 - 2 * H3 + (1 + 1j * sig) * H3) - Z**2 * H3
    return (q.km / q.kp) * bracket / Z**2


def h3_from_h1_zform(q: QuantumNumbers, H1: np.ndarray, dH1: np.ndarray, z: np.ndarray) -> np.ndarray:
    """The z-variable version: H3 = 2i sigma e^{-2z}/(a-ib)^2 (d/dz - 1 - i sigma) H1 - s^2/(a-ib)^2 H1."""
    sig, km2 = q.sigma, q.km**2
    return 2j * sig * np.exp(-2 * z) / km2 * (dH1 - (1 + 1j * sig) * H1) - q.s**2 / km2 * H1


def radial_h1(q: QuantumNumbers, branch: int, z):
    """(h1, H1) on z: h1 = J_{+-mu}(Z), H1 = Z^2 h1."""
    Z = substitute_Z(q, np.atleast_1d(np.asarray(z, dtype=float)))
    order = signed_order(mu_order(q.sigma), branch)
    h1 = jv(order, Z)
    return h1, Z**2 * h1


def h1_plugback(q: QuantumNumbers, branch: int, z) -> np.ndarray:
    """Relative residual of the H1 equation for H1 = Z^2 J_{+-mu}(Z).

    Derivatives come from the Bessel derivative identity (J' and J'' from
    neighbouring orders), not from Bessel's equation, so the check exercises
    the series values as well as the reduction.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    Z = substitute_Z(q, z)
    order = signed_order(mu_order(q.sigma), branch)
    j, jp, jpp = jv(order, Z), jvp(order, Z), jvpp(order, Z)
    H = Z**2 * j
    dH = 2 * Z**2 * j + Z**3 * jp
    d2H = 4 * Z**2 * j + 5 * Z**3 * jp + Z**4 * jpp
    return radial_ode(q, "H1").relative_residual(z, H, dH, d2H)


def form_plugback(ode: SecondOrderODE, form: BesselForm, z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=float))
    Z = 1j * math.sqrt(ode.s2) * np.exp(z)
    j, jp = jv(form.order, Z), jvp(form.order, Z)
    d1 = form.dz()
    d2 = d1.dz()
    return ode.relative_residual(z, form.evaluate(Z, j, jp), d1.evaluate(Z, j, jp), d2.evaluate(Z, j, jp))


def companion_h3_pieces(q: QuantumNumbers, branch: int) -> list[tuple[complex, int, complex]]:
    """H3 as a sum of c Z^p J_nu(Z) terms, free of cancellation near Z = 0.

    Uses (Z d/dZ + mu) J_{b mu} = b Z J_{b(mu-1)} with mu - 1 = -i sigma:
    H3 = kappa Z [-2i sigma b J_{-i b sigma}(Z) - Z J_{b mu}(Z)].
    """
    if q.km == 0:
        raise SingularDenominatorError("a - ib = 0")
    sig = q.sigma
    order = signed_order(mu_order(sig), branch)
    kappa = q.kp / q.km
    return [(-2j * sig * branch * kappa, 1, branch * (mu_order(sig) - 1)), (-kappa, 2, order)]


def pieces_eval(pieces, Z, magnitudes: bool = False):
    """Value, d/dz and d^2/dz^2 (d/dz = Z d/dZ) of sum c Z^p J_nu(Z).

    With ``magnitudes`` also returns the same three sums taken over absolute
    values of the individual terms.
    """
    Z = np.asarray(Z, dtype=complex)
    out = [np.zeros_like(Z) for _ in range(3)]
    mag = [np.zeros(Z.shape) for _ in range(3)]
    for c, p, nu in pieces:
        j, jp, jpp = jv(nu, Z), jvp(nu, Z), jvpp(nu, Z)
        zp = c * Z**p
        groups = (
            (zp * j,),
            (zp * p * j, zp * Z * jp),
            (zp * p * p * j, zp * (2 * p + 1) * Z * jp, zp * Z**2 * jpp),
        )
        for k, group in enumerate(groups):
            for t in group:
                out[k] += t
                mag[k] += np.abs(t)
    if magnitudes:
        return out[0], out[1], out[2], tuple(mag)
    return out[0], out[1], out[2]


def companion_h3_collapsed(q: QuantumNumbers, branch: int) -> BesselForm:
    """The H3 produced by the forward relation from Z^2 J_{b mu}, reduced
    with the three-term recurrence: H3 = kappa Z^2 J_{-b(1 + i sigma)}(Z).

    Same function as ``companion_h3_form``/``companion_h3_pieces`` but with
    no cancellation near Z = 0.
    """
    if q.km == 0:
        raise SingularDenominatorError("a - ib = 0")
    signed_order(mu_order(q.sigma), branch)
    return BesselForm(-branch * nu_order(q.sigma), _poly(0, 0, q.kp / q.km), _poly(0))


def companion_h1_scale(q: QuantumNumbers, mH3: np.ndarray, mdH3: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Largest term magnitude in the inverse relation, per point, given
    magnitude bounds for H3 and dH3/dz."""
    sig = q.sigma
    f = abs(q.km / q.kp) / np.abs(Z) ** 2
    terms = np.stack([
        abs(2 * sig) * mdH3,
        abs(2 * sig * (-1 + 1j * sig)) * mH3,
        np.abs(Z) ** 2 * mH3,
    ])
    return f * terms.max(axis=0)


@dataclass(frozen=True)
class CompanionCheck:
    h3: np.ndarray
    H3: np.ndarray
    roundtrip_error: float  # |Z^2 h1 (inverse relation) - Z^2 h1|, componentwise scale
    roundtrip_pointwise: float  # same, scaled by |Z^2 h1| alone
    h3_plugback: float  # max componentwise relative residual of the H3 equation


def companion_h3(q: QuantumNumbers, branch: int, z) -> CompanionCheck:
    """h3 from h1 via the forward relation, with the inverse relation and the
    H3 equation checked on the way."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    Z = substitute_Z(q, z)
    H3, dH3, d2H3, mags = pieces_eval(companion_h3_pieces(q, branch), Z, magnitudes=True)
    H1 = Z**2 * jv(signed_order(mu_order(q.sigma), branch), Z)
    back = companion_h1_values(q, H3, dH3, Z)
    diff = np.abs(back - H1)
    scale = np.maximum(np.maximum(np.abs(H1), np.abs(back)), companion_h1_scale(q, mags[0], mags[1], Z))
    err = float(np.max(diff / scale))
    pointwise = float(np.max(diff / np.maximum(np.abs(H1), np.abs(back))))
    plug = float(np.max(radial_ode(q, "H3").relative_residual(z, H3, dH3, d2H3, magnitudes=mags)))
    return CompanionCheck(h3=H3 / Z**2, H3=H3, roundtrip_error=err, roundtrip_pointwise=pointwise, h3_plugback=plug)


def sigma_zero_relations(q: QuantumNumbers, f: FieldComponents, block: str) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the sigma = 0 relations for one triple (X1, X2, X3):

    (a+ib) X1 + (a-ib) X3 = 0 and X2 - i e^{-z} / (g (a-ib)) (d/dz - 1) X1 = 0,

    each divided by the triple's largest magnitude per point.  The (d/dz - 1)
    shift applies to every block; see :mod:`.helicity`.
    """
    i0 = {"Phi": 1, "E": 4, "H": 7}[block]
    require_transverse(q)
    x1, x2, x3 = f[i0], f[i0 + 1], f[i0 + 2]
    r1 = q.kp * x1 + q.km * x3
    r2 = x2 - 1j * np.exp(-f.z) / (GAMMA * q.km) * (f.d(i0) - x1)
    scale = np.max(np.abs(np.array([x1, x2, x3])), axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    return np.abs(r1) / scale, np.abs(r2) / scale


@dataclass(frozen=True)
class AmplitudeRelations:
    branch: str  # "helicity" or "sigma-zero"
    sigma: complex
    E_over_Phi: complex
    H_over_Phi: complex
    phi0_vanishes: bool


def allowed_sigmas(epsilon: float, M: float) -> tuple[complex, complex]:
    r = cmath.sqrt(epsilon**2 - M**2)
    return r, -r


def amplitude_determinant(q: QuantumNumbers, sigma: complex | None = None) -> complex:
    """det of the 3x3 system for (Phi_j, E_j, H_j) at fixed j."""
    sig = q.sigma if sigma is None else complex(sigma)
    eps, M = q.epsilon, q.M
    m = np.array([[-M, 1j * eps, -sig], [-1j * eps, -M, 0], [sig, 0, -M]], dtype=complex)
    return complex(np.linalg.det(m))


def sigma_nonzero_constraints(q: QuantumNumbers) -> AmplitudeRelations:
    if q.M <= 0:
        raise InconsistentQuantumNumbersError("amplitude relations need M > 0")
    eps, M, sig = q.epsilon, q.M, q.sigma
    if sig == 0:
        if eps == 0:
            raise SingularDenominatorError("eps = 0 on the sigma = 0 branch")
        return AmplitudeRelations("sigma-zero", 0j, M / (1j * eps), 0j, False)
    target = eps**2 - M**2
    if abs(sig**2 - target) > SIGMA_TOL * max(1.0, abs(target), eps**2):
        raise InconsistentQuantumNumbersError(
            f"sigma^2 = eps^2 - M^2 violated: sigma^2 = {sig**2:.12g}, eps^2 - M^2 = {target:.12g}"
        )
    return AmplitudeRelations("helicity", sig, -1j * eps / M, sig / M, True)


def phi0_form(q: QuantumNumbers, branch: int = 1) -> BesselForm:
    """Phi0 = Z J_{+-k}(Z), k^2 = 1 - (eps^2 - M^2) (up to normalisation)."""
    require_transverse(q)
    return BesselForm(signed_order(phi0_order(q), branch), ZPOLY, _poly(0))


def phi0_mode(q: QuantumNumbers, z, branch: int = 1) -> FieldComponents:
    """Massive sigma = 0 profiles: Phi0 from its Bessel equation, Phi_j from
    Phi0, E_j = (M / i eps) Phi_j, H_j = 0.  Phi0(z=0) = 1."""
    from .modes import build_mode

    return build_mode(q.with_sigma(0), "sigma-zero", branch, z).fields
