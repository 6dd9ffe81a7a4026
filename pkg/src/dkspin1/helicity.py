"""Generalised helicity operator Sigma = D d/dz + C(z).

Sigma = a e^z S1 + b e^z S2 - i S3 (d/dz - 1).  The -1 shift comes from
-S1 J^{31} + S2 J^{23} = -S3 and therefore acts on all three vector blocks,
E included; only with that uniform shift does Sigma commute with the wave
operator (``e_shift=0`` reproduces the unshifted E-block variant for
comparison; it does not commute).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dk_algebra import DIM, E, H, PHI, DKMatrixSet, build_beta_set
from .wave_system import (
    GAMMA,
    FieldComponents,
    QuantumNumbers,
    assemble_operator,
    component_scale,
)


@dataclass(frozen=True)
class HelicityOperator:
    D: np.ndarray
    C0: np.ndarray
    Cz: np.ndarray  # C(z) = C0 + e^z Cz

    def C(self, z: float) -> np.ndarray:
        return self.C0 + np.exp(z) * self.Cz

    def apply(self, f: FieldComponents) -> np.ndarray:
        return self.D @ f.derivs + self.C0 @ f.values + np.exp(f.z) * (self.Cz @ f.values)


def build_helicity(q: QuantumNumbers, dk: DKMatrixSet | None = None, e_shift: float = 1.0) -> HelicityOperator:
    dk = dk or build_beta_set()
    S1, S2, S3 = dk.S
    tau3 = dk.generators.tau3
    shift = np.zeros((DIM, DIM), dtype=complex)
    for blk, c in ((PHI, 1.0), (E, e_shift), (H, 1.0)):
        shift[blk, blk] = 1j * c * tau3
    return HelicityOperator(D=-1j * S3, C0=shift, Cz=q.a * S1 + q.b * S2)


def helicity_equations(sigma: complex, q: QuantumNumbers, f: FieldComponents) -> np.ndarray:
    """Sigma f - sigma f, written out row by row."""
    g, kp, km = GAMMA, q.kp, q.km
    ez = np.exp(f.z)
    rows = [-sigma * f[0]]
    for i0 in (1, 4, 7):
        x1, x2, x3 = f[i0], f[i0 + 1], f[i0 + 2]
        d1, d3 = f.d(i0), f.d(i0 + 2)
        rows += [
            g * km * ez * x2 - 1j * (d1 - x1) - sigma * x1,
            g * kp * ez * x1 + g * km * ez * x3 - sigma * x2,
            g * kp * ez * x2 + 1j * (d3 - x3) - sigma * x3,
        ]
    return np.array(rows)


def helicity_residuals(sigma: complex, q: QuantumNumbers, f: FieldComponents, dk: DKMatrixSet | None = None) -> np.ndarray:
    """Residuals of the ten eigenvalue equations Sigma f = sigma f.

    The row-by-row form is cross-checked against the matrix operator.
    """
    explicit = helicity_equations(sigma, q, f)
    matrix = build_helicity(q, dk).apply(f) - sigma * f.values
    ref = max(np.max(np.abs(explicit)), np.max(np.abs(f.values)), np.max(np.abs(f.derivs)), 1.0)
    assert np.max(np.abs(explicit - matrix)) <= 1e-12 * ref
    return explicit


def helicity_relative(sigma: complex, q: QuantumNumbers, f: FieldComponents) -> np.ndarray:
    return np.abs(helicity_residuals(sigma, q, f)) / component_scale(f)


def commutator_apply(q: QuantumNumbers, f: FieldComponents, dk: DKMatrixSet | None = None, e_shift: float = 1.0) -> np.ndarray:
    """(Sigma W - W Sigma) f, second derivatives taken from ``f.second``."""
    if f.second is None:
        raise ValueError("commutator needs analytic second derivatives")
    dk = dk or build_beta_set()
    W = assemble_operator(q, dk)
    S = build_helicity(q, dk, e_shift)
    ez = np.exp(f.z)
    v, d1, d2 = f.values, f.derivs, f.second

    def B(x):
        return W.B0 @ x + ez * (W.Bz @ x)

    def C(x):
        return S.C0 @ x + ez * (S.Cz @ x)

    sw = S.D @ (W.A @ d2 + ez * (W.Bz @ v) + B(d1)) + C(W.A @ d1 + B(v))
    ws = W.A @ (S.D @ d2 + ez * (S.Cz @ v) + C(d1)) + B(S.D @ d1 + C(v))
    return sw - ws


BASIS_RATES = (-1.0, 0.0, 1.0)
BASIS_DEGREES = (0, 1, 2)


def test_field_basis(z=None) -> list[FieldComponents]:
    """Deterministic basis e^{kz} z^p e_j, k in {-1, 0, 1}, p <= 2, j = 0..9."""
    z = np.linspace(-1.0, 1.0, 21) if z is None else np.asarray(z, dtype=float)
    fields = []
    for k in BASIS_RATES:
        ek = np.exp(k * z)
        for p in BASIS_DEGREES:
            val = ek * z**p
            d1 = ek * (k * z**p + (p * z ** (p - 1) if p >= 1 else 0.0))
            d2 = ek * (
                k * k * z**p
                + (2 * k * p * z ** (p - 1) if p >= 1 else 0.0)
                + (p * (p - 1) * z ** (p - 2) if p >= 2 else 0.0)
            )
            for j in range(DIM):
                vals = np.zeros((DIM, z.size), dtype=complex)
                ders = np.zeros_like(vals)
                secs = np.zeros_like(vals)
                vals[j], ders[j], secs[j] = val, d1, d2
                fields.append(FieldComponents(z, vals, ders, secs))
    return fields


def commutator_residual(
    q: QuantumNumbers,
    test_fields: Iterable[FieldComponents] | None = None,
    dk: DKMatrixSet | None = None,
    e_shift: float = 1.0,
) -> float:
    """max |(Sigma W - W Sigma) f| over the test fields and grid."""
    dk = dk or build_beta_set()
    fields = test_field_basis() if test_fields is None else test_fields
    return max(float(np.max(np.abs(commutator_apply(q, f, dk, e_shift)))) for f in fields)


# mark as not a pytest test when imported into test modules
test_field_basis.__test__ = False
