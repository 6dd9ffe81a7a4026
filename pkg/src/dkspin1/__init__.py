"""Spin-1 Duffin-Kemmer field in quasi-cartesian Lobachevsky coordinates.

Separated modes, helicity eigenfunctions, Bessel radial solutions of complex
order and residual certification of every identity used along the way.
"""
from .dk_algebra import DKMatrixSet, build_beta_set, verify_dkp_trilinear
from .errors import (
    DKError,
    ExportError,
    IdentityFailure,
    InconsistentQuantumNumbersError,
    InvalidInputError,
    NumericRangeError,
)
from .geometry import build_frame, christoffel_at, christoffel_oracle, ricci_rotation_table
from .helicity import build_helicity, commutator_residual
from .modes import BRANCHES, ModeField, build_mode, export_mode, residual_scan
from .special import BACKEND, bessel_j, jv
from .wave_system import FieldComponents, QuantumNumbers, assemble_operator, explicit_residuals

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BRANCHES",
    "DKError",
    "DKMatrixSet",
    "ExportError",
    "FieldComponents",
    "IdentityFailure",
    "InconsistentQuantumNumbersError",
    "InvalidInputError",
    "ModeField",
    "NumericRangeError",
    "QuantumNumbers",
    "assemble_operator",
    "bessel_j",
    "build_beta_set",
    "build_frame",
    "build_helicity",
    "build_mode",
    "christoffel_at",
    "christoffel_oracle",
    "commutator_residual",
    "explicit_residuals",
    "export_mode",
    "jv",
    "residual_scan",
    "ricci_rotation_table",
    "verify_dkp_trilinear",
]
