"""Separated wave operator [A d/dz + B(z)] acting on the ten z-profiles.

A quasi-plane wave is exp(-i eps t + i a x + i b y) times a column of ten
functions of z; only the z-profiles are stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dk_algebra import DIM, DKMatrixSet, build_beta_set, curvature_term
from .errors import IdentityFailure, InvalidInputError

GAMMA = 1.0 / math.sqrt(2.0)
REGROUPING_TOL = 1e-12


@dataclass(frozen=True)
class QuantumNumbers:
    epsilon: float
    a: float
    b: float
    M: float = 0.0
    sigma: complex = 0j

    def __post_init__(self):
        for name in ("epsilon", "a", "b", "M"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidInputError(f"{name} must be finite, got {v!r}")
        if self.M < 0:
            raise InvalidInputError(f"mass must be >= 0, got {self.M!r}")
        object.__setattr__(self, "sigma", complex(self.sigma))

    @property
    def s(self) -> float:
        """Transverse momentum sqrt(a^2 + b^2)."""
        return math.hypot(self.a, self.b)

    @property
    def kp(self) -> complex:
        return self.a + 1j * self.b

    @property
    def km(self) -> complex:
        return self.a - 1j * self.b

    def with_sigma(self, sigma: complex) -> "QuantumNumbers":
        return QuantumNumbers(self.epsilon, self.a, self.b, self.M, sigma)


@dataclass
class FieldComponents:
    """Ten complex profiles and their z-derivatives on a grid.

    ``values``/``derivs`` have shape (10, n); ``second`` (optional) holds
    second derivatives where an operator composition needs them.
    """

    z: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    second: np.ndarray | None = None

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        self.derivs = np.asarray(self.derivs, dtype=complex)
        n = self.z.shape[0]
        if self.z.ndim != 1 or (n > 1 and np.any(np.diff(self.z) <= 0)):
            raise InvalidInputError("z grid must be 1-d and strictly increasing")
        for name in ("values", "derivs", "second"):
            arr = getattr(self, name)
            if arr is not None and arr.shape != (DIM, n):
                raise InvalidInputError(f"{name} has shape {arr.shape}, expected {(DIM, n)}")

    def __getitem__(self, i: int) -> np.ndarray:
        return self.values[i]

    def d(self, i: int) -> np.ndarray:
        return self.derivs[i]

    def __add__(self, other: "FieldComponents") -> "FieldComponents":
        if not np.array_equal(self.z, other.z):
            raise InvalidInputError("cannot add fields on different grids")
        second = None
        if self.second is not None and other.second is not None:
            second = self.second + other.second
        return FieldComponents(self.z, self.values + other.values, self.derivs + other.derivs, second)

    def scaled(self, c: complex) -> "FieldComponents":
        second = None if self.second is None else c * self.second
        return FieldComponents(self.z, c * self.values, c * self.derivs, second)

    @classmethod
    def zeros(cls, z) -> "FieldComponents":
        z = np.asarray(z, dtype=float)
        zero = np.zeros((DIM, z.shape[0]), dtype=complex)
        return cls(z, zero, zero.copy(), zero.copy())

    @classmethod
    def from_samples(cls, z, values) -> "FieldComponents":
        """Build from samples only, differentiating with :func:`fd_derivative`."""
        values = np.asarray(values, dtype=complex)
        return cls(z, values, fd_derivative(z, values))


def fd_derivative(z, values) -> np.ndarray:
    """Fourth-order finite differences along the last axis (uniform grid).

    Fallback for test fields without analytic derivatives.
    """
    z = np.asarray(z, dtype=float)
    f = np.asarray(values)
    n = z.shape[0]
    if n < 5:
        raise InvalidInputError("need at least 5 samples for 4th-order differences")
    h = z[1] - z[0]
    if not np.allclose(np.diff(z), h, rtol=1e-9, atol=0):
        raise InvalidInputError("finite-difference fallback needs a uniform grid")
    d = np.empty(f.shape, dtype=complex)
    d[..., 2:-2] = (f[..., :-4] - 8 * f[..., 1:-3] + 8 * f[..., 3:-1] - f[..., 4:]) / (12 * h)
    # one-sided 4th-order stencils at the edges
    d[..., 0] = (-25 * f[..., 0] + 48 * f[..., 1] - 36 * f[..., 2] + 16 * f[..., 3] - 3 * f[..., 4]) / (12 * h)
    d[..., 1] = (-3 * f[..., 0] - 10 * f[..., 1] + 18 * f[..., 2] - 6 * f[..., 3] + f[..., 4]) / (12 * h)
    d[..., -2] = (3 * f[..., -1] + 10 * f[..., -2] - 18 * f[..., -3] + 6 * f[..., -4] - f[..., -5]) / (12 * h)
    d[..., -1] = (25 * f[..., -1] - 48 * f[..., -2] + 36 * f[..., -3] - 16 * f[..., -4] + 3 * f[..., -5]) / (12 * h)
    return d


@dataclass(frozen=True)
class FirstOrderSystem:
    """[A d/dz + B(z)] Psi = 0 with B(z) = B0 + e^z Bz."""

    A: np.ndarray
    B0: np.ndarray
    Bz: np.ndarray
    q: QuantumNumbers = field(repr=False)

    def B(self, z: float) -> np.ndarray:
        return self.B0 + math.exp(z) * self.Bz

    def apply(self, f: FieldComponents) -> np.ndarray:
        ez = np.exp(f.z)
        return self.A @ f.derivs + self.B0 @ f.values + ez * (self.Bz @ f.values)


def assemble_operator(q: QuantumNumbers, dk: DKMatrixSet | None = None) -> FirstOrderSystem:
    dk = dk or build_beta_set()
    b0, b1, b2, b3 = dk.beta
    A = 1j * b3
    B0 = q.epsilon * b0 + 1j * curvature_term(dk) - q.M * np.eye(DIM)
    Bz = -q.a * b1 - q.b * b2
    return FirstOrderSystem(A=A, B0=B0, Bz=Bz, q=q)


def explicit_equations(q: QuantumNumbers, f: FieldComponents) -> np.ndarray:
    """The ten scalar equations written out component by component."""
    g, eps, M = GAMMA, q.epsilon, q.M
    kp, km = q.kp, q.km
    ez = np.exp(f.z)
    P0, P1, P2, P3, E1, E2, E3, H1, H2, H3 = f.values
    dP0, dP1, dP2, dP3, _, dE2, _, dH1, _, dH3 = f.derivs
    I = 1j
    return np.array([
        g * (I * q.a - q.b) * ez * E1 - g * (I * q.a + q.b) * ez * E3 - (dE2 - 2 * E2) - M * P0,
        I * eps * E1 - g * km * ez * H2 + I * (dH1 - H1) - M * P1,
        I * eps * E2 - g * kp * ez * H1 - g * km * ez * H3 - M * P2,
        I * eps * E3 - g * kp * ez * H2 - I * (dH3 - H3) - M * P3,
        -I * eps * P1 + g * (q.b + I * q.a) * ez * P0 - M * E1,
        -I * eps * P2 - dP0 - M * E2,
        -I * eps * P3 + g * (q.b - I * q.a) * ez * P0 - M * E3,
        g * km * ez * P2 - I * (dP1 - P1) - M * H1,
        g * kp * ez * P1 + g * km * ez * P3 - M * H2,
        g * kp * ez * P2 + I * (dP3 - P3) - M * H3,
    ])


@dataclass(frozen=True)
class ResidualReport:
    residuals: np.ndarray  # (10, n) explicit-form residuals
    max_abs: np.ndarray  # per equation
    relative: np.ndarray  # (10, n) residual / max component magnitude at z
    max_relative: np.ndarray  # per equation
    regrouping_gap: float  # max |matrix form - explicit form|, scaled by field size

    @property
    def worst(self) -> float:
        return float(self.max_relative.max())


def component_scale(f: FieldComponents) -> np.ndarray:
    """Largest component magnitude at each grid point (never zero)."""
    scale = np.max(np.abs(f.values), axis=0)
    return np.where(scale > 0, scale, 1.0)


def explicit_residuals(q: QuantumNumbers, f: FieldComponents, dk: DKMatrixSet | None = None) -> ResidualReport:
    x = explicit_equations(q, f)
    m = assemble_operator(q, dk).apply(f)
    ref = np.max(np.abs(x)) + np.max(np.abs(f.values)) + np.max(np.abs(f.derivs))
    gap = float(np.max(np.abs(m - x)) / ref) if ref > 0 else 0.0
    if gap >= REGROUPING_TOL:
        raise IdentityFailure(f"matrix and explicit forms disagree by {gap:.3e}")
    rel = np.abs(x) / component_scale(f)
    return ResidualReport(
        residuals=x,
        max_abs=np.max(np.abs(x), axis=1),
        relative=rel,
        max_relative=np.max(rel, axis=1),
        regrouping_gap=gap,
    )


def lorentz_residual(q: QuantumNumbers, f: FieldComponents) -> np.ndarray:
    """-i eps Phi0 + g(ia - b) e^z Phi1 - g(ia + b) e^z Phi3 - (d/dz - 2) Phi2."""
    ez = np.exp(f.z)
    g = GAMMA
    return (
        -1j * q.epsilon * f[0]
        + g * (1j * q.a - q.b) * ez * f[1]
        - g * (1j * q.a + q.b) * ez * f[3]
        - (f.d(2) - 2 * f[2])
    )


def lorentz_relative(q: QuantumNumbers, f: FieldComponents) -> float:
    return float(np.max(np.abs(lorentz_residual(q, f)) / component_scale(f)))


_SQRT2 = math.sqrt(2.0)


def cyclic_to_cartesian_vector(phi) -> np.ndarray:
    """(Phi1, Phi2, Phi3) cyclic -> cartesian (1), (2), (3) tetrad components.

    Phi2 = Phi^(3), Phi3 - Phi1 = sqrt2 Phi^(1), Phi3 + Phi1 = sqrt2 i Phi^(2).
    """
    p1, p2, p3 = np.asarray(phi, dtype=complex)
    return np.array([(p3 - p1) / _SQRT2, (p3 + p1) / (_SQRT2 * 1j), p2])


def cartesian_to_cyclic_vector(cart) -> np.ndarray:
    c1, c2, c3 = np.asarray(cart, dtype=complex)
    return np.array([(1j * c2 - c1) / _SQRT2, c3, (c1 + 1j * c2) / _SQRT2])


def cyclic_to_cartesian(f: FieldComponents) -> FieldComponents:
    """Relabel the Phi_j block into cartesian tetrad components; other blocks untouched."""
    vals = f.values.copy()
    ders = f.derivs.copy()
    vals[1:4] = cyclic_to_cartesian_vector(f.values[1:4])
    ders[1:4] = cyclic_to_cartesian_vector(f.derivs[1:4])
    second = None
    if f.second is not None:
        second = f.second.copy()
        second[1:4] = cyclic_to_cartesian_vector(f.second[1:4])
    return FieldComponents(f.z, vals, ders, second)


def cartesian_to_cyclic(f: FieldComponents) -> FieldComponents:
    vals = f.values.copy()
    ders = f.derivs.copy()
    vals[1:4] = cartesian_to_cyclic_vector(f.values[1:4])
    ders[1:4] = cartesian_to_cyclic_vector(f.derivs[1:4])
    second = None
    if f.second is not None:
        second = f.second.copy()
        second[1:4] = cartesian_to_cyclic_vector(f.second[1:4])
    return FieldComponents(f.z, vals, ders, second)
