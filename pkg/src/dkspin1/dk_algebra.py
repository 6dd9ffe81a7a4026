"""Ten-dimensional Duffin-Kemmer matrices in the cyclic spin-1 basis.

Component order everywhere: (Phi0, Phi1, Phi2, Phi3, E1, E2, E3, H1, H2, H3).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import IdentityFailure

DIM = 10
PHI0 = slice(0, 1)
PHI = slice(1, 4)
E = slice(4, 7)
H = slice(7, 10)
BLOCKS = {"Phi0": PHI0, "Phi": PHI, "E": E, "H": H}
COMPONENT_NAMES = ("Phi0", "Phi1", "Phi2", "Phi3", "E1", "E2", "E3", "H1", "H2", "H3")
ETA = np.diag([1.0, -1.0, -1.0, -1.0])

TRILINEAR_TOL = 1e-12

_R2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class CyclicGenerators:
    e: tuple  # three complex row 3-vectors
    tau: tuple  # three complex 3x3 matrices

    @property
    def e1(self):
        return self.e[0]

    @property
    def e2(self):
        return self.e[1]

    @property
    def e3(self):
        return self.e[2]

    @property
    def tau1(self):
        return self.tau[0]

    @property
    def tau2(self):
        return self.tau[1]

    @property
    def tau3(self):
        return self.tau[2]


@dataclass(frozen=True)
class DKMatrixSet:
    beta: tuple  # beta^0 .. beta^3, each (10, 10) complex
    S: tuple  # S_1, S_2, S_3: block-diagonal tau_i on the three vector blocks
    generators: CyclicGenerators
    layout: tuple = COMPONENT_NAMES

    def J(self, a: int, b: int) -> np.ndarray:
        """J^{ab} = beta^a beta^b - beta^b beta^a."""
        return self.beta[a] @ self.beta[b] - self.beta[b] @ self.beta[a]

    @property
    def J12(self):
        return self.J(1, 2)

    @property
    def J13(self):
        return self.J(1, 3)

    @property
    def J23(self):
        return self.J(2, 3)


def build_cyclic_generators() -> CyclicGenerators:
    e1 = _R2 * np.array([-1j, 0, 1j])
    e2 = _R2 * np.array([1, 0, 1], dtype=complex)
    e3 = np.array([0, 1j, 0])
    tau1 = _R2 * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
    tau2 = _R2 * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]])
    tau3 = np.diag([1, 0, -1]).astype(complex)
    return CyclicGenerators(e=(e1, e2, e3), tau=(tau1, tau2, tau3))


def spin_matrix(t: np.ndarray) -> np.ndarray:
    """Embed a 3x3 matrix on the Phi, E and H blocks (zero on Phi0)."""
    m = np.zeros((DIM, DIM), dtype=complex)
    for blk in (PHI, E, H):
        m[blk, blk] = t
    return m


def build_beta_set(gen: CyclicGenerators | None = None, check: bool = True) -> DKMatrixSet:
    gen = gen or build_cyclic_generators()
    b0 = np.zeros((DIM, DIM), dtype=complex)
    b0[PHI, E] = 1j * np.eye(3)
    b0[E, PHI] = -1j * np.eye(3)
    betas = [b0]
    for e, tau in zip(gen.e, gen.tau):
        b = np.zeros((DIM, DIM), dtype=complex)
        b[0, E] = e
        b[PHI, H] = tau
        b[E, 0] = -e.conj()
        b[H, PHI] = -tau
        betas.append(b)
    dk = DKMatrixSet(beta=tuple(betas), S=tuple(spin_matrix(t) for t in gen.tau), generators=gen)
    if check:
        check_dkp_trilinear(dk)
    return dk


def trilinear_deviations(dk: DKMatrixSet) -> dict:
    """Per-triple max |b^a b^b b^c + b^c b^b b^a - eta^ab b^c - eta^cb b^a|."""
    b = dk.beta
    out = {}
    for i, j, k in itertools.product(range(4), repeat=3):
        lhs = b[i] @ b[j] @ b[k] + b[k] @ b[j] @ b[i]
        rhs = ETA[i, j] * b[k] + ETA[k, j] * b[i]
        out[(i, j, k)] = float(np.max(np.abs(lhs - rhs)))
    return out


def verify_dkp_trilinear(dk: DKMatrixSet) -> float:
    return max(trilinear_deviations(dk).values())


def check_dkp_trilinear(dk: DKMatrixSet, tol: float = TRILINEAR_TOL) -> None:
    bad = {t: d for t, d in trilinear_deviations(dk).items() if d >= tol}
    if bad:
        listing = ", ".join(f"{t}: {d:.3e}" for t, d in sorted(bad.items()))
        raise IdentityFailure(f"DKP trilinear relation violated for triples {listing}")


def curvature_term(dk: DKMatrixSet) -> np.ndarray:
    """-beta^1 J^{31} + beta^2 J^{23}, the connection part of the wave operator."""
    return -dk.beta[1] @ dk.J(3, 1) + dk.beta[2] @ dk.J(2, 3)


def curvature_term_displayed(gen: CyclicGenerators) -> np.ndarray:
    """The same matrix assembled block by block from the generators."""
    e1, e2 = gen.e1, gen.e2
    t1, t2 = gen.tau1, gen.tau2
    comm = t1 @ t2 - t2 @ t1
    m = np.zeros((DIM, DIM), dtype=complex)
    m[0, E] = e1 @ t2 - e2 @ t1
    m[PHI, H] = comm
    m[H, PHI] = -comm
    return 1j * m


def spin_blocks(dk: DKMatrixSet):
    """Return (J12, J13, J23, curvature_term)."""
    return dk.J12, dk.J13, dk.J23, curvature_term(dk)


def commutator_identity_deviations(dk: DKMatrixSet) -> dict:
    S1, S2, S3 = dk.S
    return {
        "J12 = -iS3": float(np.max(np.abs(dk.J12 + 1j * S3))),
        "J13 = +iS2": float(np.max(np.abs(dk.J13 - 1j * S2))),
        "J23 = -iS1": float(np.max(np.abs(dk.J23 + 1j * S1))),
        "J21 = +iS3": float(np.max(np.abs(dk.J(2, 1) - 1j * S3))),
        "J31 = -iS2": float(np.max(np.abs(dk.J(3, 1) + 1j * S2))),
        "J32 = +iS1": float(np.max(np.abs(dk.J(3, 2) - 1j * S1))),
    }


def helicity_connection_deviation(dk: DKMatrixSet) -> float:
    """max |(-S^1 J^{31} + S^2 J^{23}) + S^3|."""
    S1, S2, S3 = dk.S
    m = -S1 @ dk.J(3, 1) + S2 @ dk.J(2, 3)
    return float(np.max(np.abs(m + S3)))


def generator_algebra_deviation(gen: CyclicGenerators) -> float:
    """[tau_1, tau_2] = i tau_3 and cyclic permutations."""
    t = gen.tau
    dev = 0.0
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        dev = max(dev, float(np.max(np.abs(t[i] @ t[j] - t[j] @ t[i] - 1j * t[k]))))
    return dev
