import numpy as np
import pytest

from dkspin1 import geometry
from dkspin1.errors import InvalidInputError, NumericRangeError


@pytest.mark.parametrize("z", [-3.0, -0.7, 0.0, 1.3, 3.0])
def test_metric_and_tetrad(z):
    fr = geometry.build_frame(z)
    assert np.allclose(fr.metric, np.diag([1.0, -np.exp(-2 * z), -np.exp(-2 * z), -1.0]))
    # e_(a)^alpha e_(b)^beta g_{alpha beta} = eta_ab
    assert geometry.tetrad_orthonormality_defect(z) < 1e-14
    assert np.allclose(fr.tetrad_up @ fr.metric, fr.tetrad_down)


@pytest.mark.parametrize("z", np.linspace(-3, 3, 13))
def test_christoffel_matches_oracle(z):
    an = geometry.christoffel_at(z).christoffel
    fd = geometry.christoffel_oracle(z).christoffel
    assert np.max(np.abs(an - fd)) < 1e-6


def test_christoffel_symmetric_lower_indices():
    g = geometry.christoffel_at(0.4).christoffel
    assert np.array_equal(g, g.transpose(0, 2, 1))


def test_christoffel_values():
    z = 0.25
    c = geometry.christoffel_at(z)
    # only Gamma^x_{xz}, Gamma^y_{yz} = -1 and Gamma^z_{xx}, Gamma^z_{yy} = +e^{-2z}
    assert c.gamma_x[0, 2] == pytest.approx(-1.0)
    assert c.gamma_y[1, 2] == pytest.approx(-1.0)
    assert c.gamma_z[0, 0] == pytest.approx(np.exp(-2 * z))
    assert c.gamma_z[1, 1] == pytest.approx(np.exp(-2 * z))
    assert np.count_nonzero(np.round(c.christoffel, 15)) == 6


@pytest.mark.parametrize("z", [-2.0, 0.0, 2.5])
def test_ricci_rotation_from_tetrad(z):
    assert np.max(np.abs(geometry.ricci_rotation_from_tetrad(z) - geometry.ricci_rotation_table())) < 1e-6


def test_ricci_table_entries():
    g = geometry.ricci_rotation_table()
    assert g[3, 1, 1] == -1.0 and g[2, 3, 2] == 1.0
    assert np.array_equal(g, -g.transpose(1, 0, 2))
    assert np.count_nonzero(g) == 4


@pytest.mark.parametrize("h", [0.0, -1e-3, 0.5])
def test_oracle_rejects_bad_step(h):
    with pytest.raises((InvalidInputError, NumericRangeError)):
        geometry.christoffel_oracle(0.0, h)
