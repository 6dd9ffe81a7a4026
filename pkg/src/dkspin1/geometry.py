"""Quasi-cartesian chart of Lobachevsky space (curvature radius 1).

Coordinates are ordered (t, x, y, z); spatial matrices use (x, y, z).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ToleranceUnreachableError

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class FrameData:
    z: float
    metric: np.ndarray
    tetrad_up: np.ndarray  # e_(a)^beta, row a
    tetrad_down: np.ndarray  # e_(a)beta, row a


@dataclass(frozen=True)
class ConnectionData:
    christoffel: np.ndarray  # shape (3, 3, 3): [i, j, k] = Gamma^i_{jk}
    ricci_rotation: np.ndarray  # shape (4, 4, 4): [a, b, c] = gamma_{abc}

    @property
    def gamma_x(self) -> np.ndarray:
        return self.christoffel[0]

    @property
    def gamma_y(self) -> np.ndarray:
        return self.christoffel[1]

    @property
    def gamma_z(self) -> np.ndarray:
        return self.christoffel[2]


def _check_z(z: float) -> float:
    z = float(z)
    if not math.isfinite(z):
        raise InvalidInputError(f"z must be finite, got {z!r}")
    return z


def metric_at(z: float) -> np.ndarray:
    w = math.exp(-2.0 * _check_z(z))
    return np.diag([1.0, -w, -w, -1.0])


def build_frame(z: float) -> FrameData:
    z = _check_z(z)
    ez = math.exp(z)
    return FrameData(
        z=z,
        metric=metric_at(z),
        tetrad_up=np.diag([1.0, ez, ez, 1.0]),
        tetrad_down=np.diag([1.0, -1.0 / ez, -1.0 / ez, -1.0]),
    )


def ricci_rotation_table() -> np.ndarray:
    """gamma_{abc} of the chart: only gamma_{311} = -1 and gamma_{232} = +1.

    Entries related by the antisymmetry gamma_{abc} = -gamma_{bac}
    (gamma_{131} = +1, gamma_{322} = -1) are filled in too, because the
    connection term sums over both orderings of (a, b).
    """
    g = np.zeros((4, 4, 4))
    g[3, 1, 1], g[1, 3, 1] = -1.0, 1.0
    g[2, 3, 2], g[3, 2, 2] = 1.0, -1.0
    return g


def christoffel_at(z: float) -> ConnectionData:
    z = _check_z(z)
    gam = np.zeros((3, 3, 3))
    gam[0, 0, 2] = gam[0, 2, 0] = -1.0
    gam[1, 1, 2] = gam[1, 2, 1] = -1.0
    gam[2, 0, 0] = gam[2, 1, 1] = math.exp(-2.0 * z)
    return ConnectionData(christoffel=gam, ricci_rotation=ricci_rotation_table())


def _central_diff(fn, z: float, h: float) -> np.ndarray:
    # five-point stencil; the three-point one misses 1e-6 once e^{-2z} ~ 400
    return (fn(z - 2 * h) - 8 * fn(z - h) + 8 * fn(z + h) - fn(z + 2 * h)) / (12.0 * h)


def christoffel_oracle(z: float, h: float = DEFAULT_FD_STEP) -> ConnectionData:
    """Christoffel symbols from central differences of the metric.

    Only used to cross-check :func:`christoffel_at`.
    """
    z = _check_z(z)
    if not 0.0 < h < 0.1:
        raise ToleranceUnreachableError(f"step h={h!r} outside (0, 0.1)")
    g = metric_at(z)[1:, 1:]
    ginv = np.linalg.inv(g)
    # dg[l, j, k] = d_l g_{jk}; the metric depends on z only
    dg = np.zeros((3, 3, 3))
    dg[2] = _central_diff(lambda u: metric_at(u)[1:, 1:], z, h)
    lowered = -dg + np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0))
    # lowered[l, j, k] = -d_l g_jk + d_j g_lk + d_k g_lj
    gam = 0.5 * np.einsum("il,ljk->ijk", ginv, lowered)
    return ConnectionData(christoffel=gam, ricci_rotation=ricci_rotation_from_tetrad(z, h))


def ricci_rotation_from_tetrad(z: float, h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """gamma_{abc} = -(nabla_beta e_(a)alpha) e_(b)^alpha e_(c)^beta, numerically."""
    z = _check_z(z)
    frame = build_frame(z)
    d_down = _central_diff(lambda u: build_frame(u).tetrad_down, z, h)
    gam4 = np.zeros((4, 4, 4))
    gam4[1:, 1:, 1:] = christoffel_at(z).christoffel
    # cov[a, alpha, beta] = d_beta e_(a)alpha - Gamma^rho_{alpha beta} e_(a)rho
    partial = np.zeros((4, 4, 4))
    partial[:, :, 3] = d_down
    cov = partial - np.einsum("rab,cr->cab", gam4, frame.tetrad_down)
    return -np.einsum("aij,bi,cj->abc", cov, frame.tetrad_up, frame.tetrad_up)


def tetrad_orthonormality_defect(z: float) -> float:
    f = build_frame(z)
    eta = f.tetrad_up @ f.metric @ f.tetrad_up.T
    return float(np.max(np.abs(eta - MINKOWSKI)))
