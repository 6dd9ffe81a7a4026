import json

import numpy as np
import pytest

from dkspin1.errors import (
    ExportError,
    InconsistentQuantumNumbersError,
    InvalidInputError,
    SeriesRangeError,
    SingularDenominatorError,
)
from dkspin1.modes import (
    BRANCHES,
    amplitude_relation_errors,
    build_mode,
    export_mode,
    load_mode_csv,
    load_mode_json,
    residual_scan,
)
from dkspin1.wave_system import FieldComponents, QuantumNumbers, explicit_residuals


@pytest.mark.parametrize("branch", BRANCHES)
@pytest.mark.parametrize("bb", [1, -1])
def test_every_branch_certifies(q_ref, branch, bb):
    q = QuantumNumbers(5, 1, 1, 0) if branch == "massless-gauge" else q_ref
    m = build_mode(q, branch, bb)
    rep = residual_scan(m)
    assert rep.passed, rep.failing()
    assert rep.max_residual < 1e-11


def test_sigma_values(q_ref):
    assert build_mode(q_ref, "helicity-plus").sigma == 4
    assert build_mode(q_ref, "helicity-minus").sigma == -4
    assert build_mode(q_ref, "sigma-zero").sigma == 0


def test_evanescent_helicity_sigma():
    # eps < M: sigma = +-i sqrt(M^2 - eps^2)
    m = build_mode(QuantumNumbers(2, 0.5, 1, 3), "helicity-plus")
    assert np.isclose(m.sigma, 1j * np.sqrt(5))
    assert residual_scan(m).passed


def test_normalisation(q_ref):
    m = build_mode(q_ref, "helicity-plus", 1, np.linspace(-1, 1, 21))
    assert np.isclose(m.fields[2][10], 1.0)
    m0 = build_mode(q_ref, "sigma-zero", 1, np.linspace(-1, 1, 21))
    assert np.isclose(m0.fields[0][10], 1.0)


def test_flipped_h3_sign_fails(q_ref):
    m = build_mode(q_ref, "helicity-plus")
    vals, ders = m.fields.values.copy(), m.fields.derivs.copy()
    vals[9] *= -1
    ders[9] *= -1
    rep = residual_scan(m.with_fields(FieldComponents(m.z, vals, ders)))
    assert not rep.passed
    assert any("H3" in line or "row" in line for line in rep.failing())


def test_linearity_of_certification(q_ref):
    a = build_mode(q_ref, "helicity-plus", 1)
    b = build_mode(q_ref, "helicity-plus", -1)
    combo = a.fields.scaled(0.3 - 2j) + b.fields.scaled(1.7)
    rep = residual_scan(a.with_fields(combo))
    assert rep.passed
    # helicity eigenvalues differ: the sum of opposite branches is not an eigenfunction
    c = build_mode(q_ref, "helicity-minus", 1)
    assert not residual_scan(a.with_fields(a.fields + c.fields)).passed
    assert explicit_residuals(a.q, a.fields + c.fields).max_relative.max() < 1e-10


def test_amplitude_relations(q_ref):
    for branch in ("helicity-plus", "helicity-minus"):
        err = amplitude_relation_errors(build_mode(q_ref, branch))
        assert err["Phi0"] == 0 and err["E"] < 1e-14 and err["H"] < 1e-14


def test_profiles_and_psi(q_ref):
    m = build_mode(q_ref, "helicity-minus", 1, np.linspace(-1, 1, 11))
    vals, ders = m.profiles_at(m.z)
    assert np.allclose(vals, m.fields.values) and np.allclose(ders, m.fields.derivs)
    psi = m.psi(0.3, 1.0, -2.0, 0.4)
    ref = np.exp(-1j * 5 * 0.3 + 1j * 1.0 - 1j * 2.0) * m.profiles_at(0.4)[0][:, 0]
    assert psi.shape == (10,) and np.allclose(psi, ref)


@pytest.mark.parametrize(
    "q,branch,exc",
    [
        (QuantumNumbers(3, 1, 1, 3), "helicity-plus", InconsistentQuantumNumbersError),
        (QuantumNumbers(5, 1, 1, 0), "helicity-plus", InconsistentQuantumNumbersError),
        (QuantumNumbers(5, 1, 1, 3), "massless-gauge", InconsistentQuantumNumbersError),
        (QuantumNumbers(5, 1, 1, 0), "sigma-zero", InconsistentQuantumNumbersError),
        (QuantumNumbers(3, 1, 1, 3), "sigma-zero", SingularDenominatorError),
        (QuantumNumbers(0, 1, 1, 0), "massless-gauge", SingularDenominatorError),
        (QuantumNumbers(5, 1, 1, 3), "spin-up", InvalidInputError),
    ],
)
def test_inconsistent_inputs(q, branch, exc):
    with pytest.raises(exc):
        build_mode(q, branch)


def test_grid_cap(q_ref):
    with pytest.raises(SeriesRangeError):
        build_mode(q_ref, "helicity-plus", 1, np.linspace(0, 3.5, 11))


def test_export_round_trip_json(tmp_path, q_ref):
    m = build_mode(q_ref, "helicity-plus", 1, np.linspace(-1, 1, 31))
    rep = residual_scan(m)
    path = export_mode(m, "json", tmp_path / "m.json", rep)
    meta, f = load_mode_json(path)
    assert meta["branch"] == "helicity-plus" and meta["residual"]["passed"]
    assert np.array_equal(f.values, m.fields.values) and np.array_equal(f.derivs, m.fields.derivs)
    # residuals recomputed from the file
    assert explicit_residuals(q_ref.with_sigma(4), f).max_relative.max() < 1e-12


def test_export_round_trip_csv(tmp_path, q_ref):
    m = build_mode(q_ref, "sigma-zero", -1, np.linspace(-1, 1, 31))
    path = export_mode(m, "csv", tmp_path / "m.csv")
    meta, z, vals = load_mode_csv(path)
    assert meta["bessel_branch"] == -1
    assert np.array_equal(z, m.z)
    assert np.allclose(vals, m.fields.values, rtol=1e-15, atol=0)
    header = path.read_text().splitlines()[1].split(",")
    assert header[0] == "z" and len(header) == 21


def test_export_errors(tmp_path, q_ref):
    m = build_mode(q_ref, "helicity-plus", 1, np.linspace(-1, 1, 5))
    with pytest.raises(ExportError):
        export_mode(m, "json", tmp_path / "missing" / "m.json")
    with pytest.raises(InvalidInputError):
        export_mode(m, "xml", tmp_path / "m.xml")


def test_report_summary_serialisable(q_ref):
    rep = residual_scan(build_mode(q_ref, "helicity-plus"))
    json.dumps(rep.summary())
