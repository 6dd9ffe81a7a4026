"""Complete quasi-plane-wave modes and their residual certification."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dk_algebra import COMPONENT_NAMES, DIM
from .errors import (
    ExportError,
    InconsistentQuantumNumbersError,
    InvalidInputError,
    SeriesRangeError,
    SingularDenominatorError,
)
from .helicity import helicity_residuals
from .radial import (
    BesselForm,
    FormSum,
    allowed_sigmas,
    companion_h3_collapsed,
    ez_poly,
    h1_form,
    phi0_form,
    require_transverse,
    sigma_nonzero_constraints,
)
from .special.bessel import MAX_ARG
from .wave_system import (
    GAMMA,
    FieldComponents,
    QuantumNumbers,
    component_scale,
    explicit_residuals,
    lorentz_residual,
)

BRANCHES = ("helicity-plus", "helicity-minus", "sigma-zero", "massless-gauge")
DEFAULT_Z = (-2.0, 2.0, 401)
SIGMA_TOL = 1e-12


def default_grid() -> np.ndarray:
    return np.linspace(*DEFAULT_Z)


def check_grid(q: QuantumNumbers, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size < 3:
        raise InvalidInputError("z grid needs at least 3 points")
    if np.any(np.diff(z) <= 0):
        raise InvalidInputError("z grid must be strictly increasing")
    zmax = q.s * math.exp(z[-1])
    if zmax > MAX_ARG:
        raise SeriesRangeError(f"|Z| reaches {zmax:.4g} on this grid; cap is {MAX_ARG:g}")
    return z


def branch_sigma(q: QuantumNumbers, branch: str) -> complex:
    """sigma implied by (eps, M) and the branch name."""
    if branch == "sigma-zero":
        return 0j
    if branch == "massless-gauge":
        return 0j
    if branch not in ("helicity-plus", "helicity-minus"):
        raise InvalidInputError(f"unknown branch {branch!r}; choose from {BRANCHES}")
    plus, minus = allowed_sigmas(q.epsilon, q.M)
    return plus if branch == "helicity-plus" else minus


def _consistency(q: QuantumNumbers, branch: str) -> QuantumNumbers:
    sigma = branch_sigma(q, branch)
    if branch in ("helicity-plus", "helicity-minus"):
        if q.M <= 0:
            raise InconsistentQuantumNumbersError("helicity branches need M > 0 (amplitudes carry 1/M)")
        if abs(sigma) <= SIGMA_TOL * max(1.0, q.epsilon**2):
            raise InconsistentQuantumNumbersError(
                f"sigma^2 = eps^2 - M^2 = {q.epsilon**2 - q.M**2:g}: sigma = 0 requires the zero branch"
            )
        q = q.with_sigma(sigma)
        sigma_nonzero_constraints(q)
        return q
    if branch == "sigma-zero":
        if q.M <= 0:
            raise InconsistentQuantumNumbersError("sigma-zero branch is massive; use massless-gauge for M = 0")
        if q.epsilon**2 == q.M**2:
            raise SingularDenominatorError("eps^2 = M^2: Phi_j carry 1/(eps^2 - M^2)")
    elif q.M != 0:
        raise InconsistentQuantumNumbersError(f"massless-gauge branch needs M = 0, got M = {q.M:g}")
    if q.epsilon == 0:
        raise SingularDenominatorError("eps = 0 on a sigma = 0 branch")
    return q.with_sigma(0)


def _helicity_forms(q: QuantumNumbers, bessel_branch: int) -> list[FormSum]:
    H1 = FormSum.of(h1_form(q, bessel_branch))
    # H3 in its recurrence-reduced form (one Bessel order, no cancellation)
    H3 = FormSum.of(companion_h3_collapsed(q, bessel_branch))
    H2 = (H1 * q.kp + H3 * q.km) * ez_poly(q) * (GAMMA / q.sigma)
    H = [H1, H2, H3]
    Phi = [h * (q.M / q.sigma) for h in H]
    E = [p * (-1j * q.epsilon / q.M) for p in Phi]
    return [FormSum.of(BesselForm.zero(H1.primary)), *Phi, *E, *H]


def _gradient_forms(q: QuantumNumbers, phi0: FormSum) -> list[FormSum]:
    """(g(b+ia) e^z Phi0, -dPhi0/dz, g(b-ia) e^z Phi0)."""
    ez = ez_poly(q)
    return [
        phi0 * ez * (GAMMA * (q.b + 1j * q.a)),
        phi0.dz() * -1.0,
        phi0 * ez * (GAMMA * (q.b - 1j * q.a)),
    ]


def _sigma_zero_forms(q: QuantumNumbers, bessel_branch: int) -> list[FormSum]:
    P0 = FormSum.of(phi0_form(q, bessel_branch))
    c = q.epsilon**2 - q.M**2
    ez = ez_poly(q)
    eps = q.epsilon
    Phi = [
        P0 * ez * (GAMMA * eps * q.km / c),
        P0.dz() * (1j * eps / c),
        P0 * ez * (-GAMMA * eps * q.kp / c),
    ]
    E = [p * (q.M / (1j * eps)) for p in Phi]
    zero = FormSum.of(BesselForm.zero(P0.primary))
    return [P0, *Phi, *E, zero, zero, zero]


def _gauge_forms(q: QuantumNumbers, bessel_branch: int) -> list[FormSum]:
    P0 = FormSum.of(phi0_form(q, bessel_branch))
    Phi = [g * (1.0 / (1j * q.epsilon)) for g in _gradient_forms(q, P0)]
    zero = FormSum.of(BesselForm.zero(P0.primary))
    return [P0, *Phi, zero, zero, zero, zero, zero, zero]


def _normalisation(q: QuantumNumbers, branch: str, forms: list[FormSum]) -> complex:
    Z0 = np.array([1j * q.s])
    cache = {}
    at0 = [complex(f.evaluate(Z0, cache)[0]) for f in forms]
    if branch in ("sigma-zero", "massless-gauge"):
        ref_idx = [0]
    else:
        ref_idx = [2, 1, 3]
    for i in ref_idx:
        if abs(at0[i]) > 1e-300:
            return 1.0 / at0[i]
    raise SeriesRangeError("reference component vanishes at z = 0; cannot normalise")


def _evaluate_forms(forms: list[FormSum], Z) -> tuple[np.ndarray, np.ndarray]:
    cache = {}
    vals = np.array([f.evaluate(Z, cache) for f in forms])
    ders = np.array([f.dz().evaluate(Z, cache) for f in forms])
    return vals, ders


@dataclass
class ModeField:
    q: QuantumNumbers
    branch: str
    bessel_branch: int
    forms: list = field(repr=False)
    fields: FieldComponents = field(repr=False)

    @property
    def z(self) -> np.ndarray:
        return self.fields.z

    @property
    def sigma(self) -> complex:
        return self.q.sigma

    @property
    def order(self) -> complex:
        """Bessel order of the leading profile (H1 or Phi0)."""
        return self.forms[0].primary

    def profiles_at(self, z) -> tuple[np.ndarray, np.ndarray]:
        """(values, z-derivatives) of the ten profiles at arbitrary z."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        return _evaluate_forms(self.forms, 1j * self.q.s * np.exp(z))

    def psi(self, t, x, y, z) -> np.ndarray:
        """Psi(t, x, y, z) = exp(-i eps t + i a x + i b y) * profiles(z)."""
        phase = np.exp(-1j * self.q.epsilon * t + 1j * self.q.a * x + 1j * self.q.b * y)
        vals, _ = self.profiles_at(z)
        return phase * vals[:, 0] if np.ndim(z) == 0 else phase * vals

    def with_fields(self, fields: FieldComponents) -> "ModeField":
        return ModeField(self.q, self.branch, self.bessel_branch, self.forms, fields)


def build_mode(q: QuantumNumbers, branch: str, bessel_branch: int = 1, z=None) -> ModeField:
    """Assemble the ten profiles for one branch on the z grid.

    ``q.sigma`` is ignored on input; it is fixed by (eps, M) and the branch.
    """
    if branch not in BRANCHES:
        raise InvalidInputError(f"unknown branch {branch!r}; choose from {BRANCHES}")
    require_transverse(q)
    q = _consistency(q, branch)
    z = check_grid(q, default_grid() if z is None else z)
    if branch.startswith("helicity"):
        forms = _helicity_forms(q, bessel_branch)
    elif branch == "sigma-zero":
        forms = _sigma_zero_forms(q, bessel_branch)
    else:
        forms = _gauge_forms(q, bessel_branch)
    norm = _normalisation(q, branch, forms)
    forms = [f * norm for f in forms]
    vals, ders = _evaluate_forms(forms, 1j * q.s * np.exp(z))
    mode = ModeField(q, branch, bessel_branch, forms, FieldComponents(z, vals, ders))
    return mode


@dataclass(frozen=True)
class ScanReport:
    tolerance: float
    wave_max_relative: np.ndarray  # one entry per row of the 10-row system
    wave_argmax_z: np.ndarray
    helicity_max_relative: np.ndarray
    helicity_argmax_z: np.ndarray
    regrouping_gap: float

    @property
    def max_residual(self) -> float:
        return float(max(self.wave_max_relative.max(), self.helicity_max_relative.max()))

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance

    def failing(self) -> list[str]:
        out = []
        for name, arr, where in (
            ("wave", self.wave_max_relative, self.wave_argmax_z),
            ("helicity", self.helicity_max_relative, self.helicity_argmax_z),
        ):
            for i, (r, zz) in enumerate(zip(arr, where)):
                if r >= self.tolerance:
                    out.append(f"{name}[{i}] ({WAVE_EQUATION_LABELS[i] if name == 'wave' else COMPONENT_NAMES[i]}): {r:.3e} at z={zz:.4g}")
        return out

    def summary(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "wave_max_relative": [float(x) for x in self.wave_max_relative],
            "helicity_max_relative": [float(x) for x in self.helicity_max_relative],
        }


WAVE_EQUATION_LABELS = (
    "Phi0-row",
    "Phi-row 1",
    "Phi-row 2",
    "Phi-row 3",
    "E-row 1",
    "E-row 2",
    "E-row 3",
    "H-row 1",
    "H-row 2",
    "H-row 3",
)


def residual_scan(mode: ModeField, tolerance: float = 1e-8) -> ScanReport:
    f = mode.fields
    rep = explicit_residuals(mode.q, f)
    hel = np.abs(helicity_residuals(mode.sigma, mode.q, f)) / component_scale(f)
    return ScanReport(
        tolerance=tolerance,
        wave_max_relative=rep.max_relative,
        wave_argmax_z=f.z[np.argmax(rep.relative, axis=1)],
        helicity_max_relative=hel.max(axis=1),
        helicity_argmax_z=f.z[np.argmax(hel, axis=1)],
        regrouping_gap=rep.regrouping_gap,
    )


def amplitude_relation_errors(mode: ModeField) -> dict:
    """Pointwise checks of Phi0 = 0, E = -i eps/M Phi, H = sigma/M Phi (relative)."""
    f, q = mode.fields, mode.q
    scale = component_scale(f)
    phi, E, H = f.values[1:4], f.values[4:7], f.values[7:10]
    return {
        "Phi0": float(np.max(np.abs(f[0]) / scale)),
        "E": float(np.max(np.abs(E - (-1j * q.epsilon / q.M) * phi) / scale)),
        "H": float(np.max(np.abs(H - (q.sigma / q.M) * phi) / scale)),
    }


def gauge_relation_errors(mode: ModeField) -> dict:
    """Massless relations linking Phi_j to Phi0, plus E = H = 0."""
    f, q = mode.fields, mode.q
    scale = component_scale(f)
    ez = np.exp(f.z)
    eps = q.epsilon
    r = [
        -1j * eps * f[1] + GAMMA * (q.b + 1j * q.a) * ez * f[0],
        -1j * eps * f[2] - f.d(0),
        -1j * eps * f[3] + GAMMA * (q.b - 1j * q.a) * ez * f[0],
    ]
    return {
        "relations": float(max(np.max(np.abs(x) / scale) for x in r)),
        "E": float(np.max(np.abs(f.values[4:7]))),
        "H": float(np.max(np.abs(f.values[7:10]))),
    }


def lorentz_relative(mode: ModeField) -> float:
    f = mode.fields
    return float(np.max(np.abs(lorentz_residual(mode.q, f)) / component_scale(f)))


# --- export -----------------------------------------------------------------

def _meta(mode: ModeField, report: ScanReport | None) -> dict:
    q = mode.q
    meta = {
        "epsilon": q.epsilon,
        "a": q.a,
        "b": q.b,
        "M": q.M,
        "sigma": [q.sigma.real, q.sigma.imag],
        "branch": mode.branch,
        "bessel_branch": mode.bessel_branch,
        "bessel_order": [mode.order.real, mode.order.imag],
        "components": list(COMPONENT_NAMES),
    }
    if report is not None:
        meta["residual"] = report.summary()
    return meta


def _csv_text(mode: ModeField, report: ScanReport | None) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(_meta(mode, report), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    header = ["z"]
    for name in COMPONENT_NAMES:
        header += [f"re_{name}", f"im_{name}"]
    w.writerow(header)
    vals = mode.fields.values
    for k, zk in enumerate(mode.z):
        row = [f"{zk:.17g}"]
        for i in range(DIM):
            row += [f"{vals[i, k].real:.17g}", f"{vals[i, k].imag:.17g}"]
        w.writerow(row)
    return buf.getvalue()


def _json_text(mode: ModeField, report: ScanReport | None) -> str:
    f = mode.fields
    profiles = {"z": f.z.tolist()}
    for i, name in enumerate(COMPONENT_NAMES):
        profiles[name] = {
            "re": f.values[i].real.tolist(),
            "im": f.values[i].imag.tolist(),
            "d_re": f.derivs[i].real.tolist(),
            "d_im": f.derivs[i].imag.tolist(),
        }
    return json.dumps({"meta": _meta(mode, report), "profiles": profiles})


def export_mode(mode: ModeField, fmt: str, destination, report: ScanReport | None = None) -> Path:
    if fmt not in ("csv", "json"):
        raise InvalidInputError(f"unknown export format {fmt!r}")
    text = _csv_text(mode, report) if fmt == "csv" else _json_text(mode, report)
    path = Path(destination)
    try:
        path.write_text(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc
    return path


def load_mode_json(source) -> tuple[dict, FieldComponents]:
    """Read a JSON export back into (meta, FieldComponents)."""
    path = Path(source)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc}") from exc
    prof = data["profiles"]
    z = np.array(prof["z"], dtype=float)
    vals = np.array([np.array(prof[n]["re"]) + 1j * np.array(prof[n]["im"]) for n in COMPONENT_NAMES])
    ders = np.array([np.array(prof[n]["d_re"]) + 1j * np.array(prof[n]["d_im"]) for n in COMPONENT_NAMES])
    return data["meta"], FieldComponents(z, vals, ders)


def load_mode_csv(source) -> tuple[dict, np.ndarray, np.ndarray]:
    """Read a CSV export: (meta, z, values[10, n])."""
    path = Path(source)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc}") from exc
    meta = json.loads(lines[0][2:])
    rows = np.array([[float(x) for x in ln.split(",")] for ln in lines[2:]])
    z = rows[:, 0]
    vals = rows[:, 1::2] + 1j * rows[:, 2::2]
    return meta, z, vals.T
