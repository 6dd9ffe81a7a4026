import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from dkspin1.errors import BranchUnavailableError, DegenerateMomentumError, InconsistentQuantumNumbersError
from dkspin1.errors import NumericRangeError
from dkspin1.modes import build_mode
from dkspin1.radial import (
    BesselForm,
    FormSum,
    allowed_sigmas,
    amplitude_determinant,
    companion_h3,
    companion_h3_collapsed,
    companion_h3_form,
    companion_h3_pieces,
    form_plugback,
    h1_form,
    h1_plugback,
    phi0_form,
    pieces_eval,
    radial_ode,
    require_transverse,
    sigma_nonzero_constraints,
    sigma_zero_relations,
    signed_order,
    substitute_Z,
)
from dkspin1.special import jv
from dkspin1.wave_system import QuantumNumbers

Z_GRID = np.linspace(-2, 2, 101)


def q_sig(sigma, a=1.0, b=1.0):
    return QuantumNumbers(5.0, a, b, 3.0, sigma)


def test_substitution_is_imaginary():
    q = q_sig(4.0, 3.0, 4.0)
    Z = substitute_Z(q, np.array([0.0, math.log(2)]))
    assert np.allclose(Z, [5j, 10j])


def test_radial_ode_orders():
    # u = Z^m J_k with m = -p/2 and k^2 = p^2/4 - c0
    for sigma in (4.0, -1.3 + 0.2j):
        q = q_sig(sigma)
        h1 = radial_ode(q, "H1")
        assert h1.power == 2
        assert np.isclose(h1.order_squared, (1 - 1j * sigma) ** 2)
        h3 = radial_ode(q, "H3")
        assert np.isclose(h3.order_squared, (1 + 1j * sigma) ** 2)
    p0 = radial_ode(QuantumNumbers(5, 1, 1, 3), "Phi0")
    assert p0.power == 1 and np.isclose(p0.order_squared, 1 - 16)


@pytest.mark.parametrize("sigma", [4.0, -4.0, 0.3 + 1.2j])
@pytest.mark.parametrize("branch", [1, -1])
def test_h1_plugback(sigma, branch):
    assert np.max(h1_plugback(q_sig(sigma), branch, Z_GRID)) < 1e-12


def test_wrong_order_fails_plugback():
    q = q_sig(4.0)
    wrong = BesselForm(1 + 4j, Polynomial([0, 0, 1 + 0j]), Polynomial([0j]))  # sign of sigma flipped
    assert np.max(form_plugback(radial_ode(q, "H1"), wrong, Z_GRID)) > 1e-3


@pytest.mark.parametrize("branch", [1, -1])
def test_companion_h3(branch):
    c = companion_h3(q_sig(-2.7, 0.4, 1.9), branch, Z_GRID)
    assert c.h3_plugback < 1e-12
    assert c.roundtrip_error < 1e-12


@pytest.mark.parametrize("branch", [1, -1])
def test_companion_forms_agree(branch):
    # polynomial form, recurrence pieces and collapsed single-order form
    q = q_sig(1.7, 0.8, -0.5)
    Z = substitute_Z(q, np.linspace(-0.5, 1.5, 21))
    bare = BesselForm(signed_order(1 - 1.7j, branch), Polynomial([1 + 0j]), Polynomial([0j]))
    a = companion_h3_form(q, bare).evaluate(Z)
    b = pieces_eval(companion_h3_pieces(q, branch), Z)[0]
    c = companion_h3_collapsed(q, branch).evaluate(Z)
    assert np.allclose(a, c, rtol=1e-11) and np.allclose(b, c, rtol=1e-11)


def test_bessel_form_dz_matches_numeric():
    form = BesselForm(0.7 - 2j, Polynomial([1, 2, 0.5j]), Polynomial([0, 1 - 1j]))
    s = 1.3
    z = np.linspace(-1, 1, 2001)
    Z = 1j * s * np.exp(z)
    v = form.evaluate(Z)
    d = form.dz().evaluate(Z)
    fd = np.gradient(v, z, edge_order=2)
    assert np.max(np.abs(fd[5:-5] - d[5:-5])) / np.max(np.abs(d)) < 1e-5


def test_bessel_form_rejects_constant_Q():
    with pytest.raises(ValueError):
        BesselForm(1.0, Polynomial([1.0]), Polynomial([1.0])).dz()


def test_form_sum_merges_orders():
    a = BesselForm(1.0, Polynomial([1.0]), Polynomial([0.0]))
    b = BesselForm(2.0, Polynomial([0, 1.0]), Polynomial([0.0]))
    fs = FormSum.of(a, b, a)
    assert fs.orders == (1.0, 2.0)
    Z = np.array([0.5j, 2.0 + 1j])
    assert np.allclose(fs.evaluate(Z), 2 * jv(1.0, Z) + Z * jv(2.0, Z))
    assert np.allclose(fs.dz().evaluate(Z), 2 * a.dz().evaluate(Z) + b.dz().evaluate(Z))


def test_minus_branch_integer_order_unavailable():
    with pytest.raises(BranchUnavailableError):
        signed_order(2.0, -1)
    assert signed_order(2.0, 1) == 2.0


def test_transverse_required():
    with pytest.raises(DegenerateMomentumError):
        require_transverse(QuantumNumbers(5, 0, 0, 3))


def test_allowed_sigmas_and_determinant():
    assert allowed_sigmas(5, 3) == (4, -4)
    p, m = allowed_sigmas(3, 5)
    assert np.isclose(p, 4j) and np.isclose(m, -4j)
    rng = np.random.default_rng(1)
    for _ in range(10):
        eps, M = rng.uniform(0.1, 5, 2)
        for sig in allowed_sigmas(eps, M):
            assert abs(amplitude_determinant(QuantumNumbers(eps, 1, 1, M), sig)) < 1e-12
        # determinant = M (eps^2 - M^2 - sigma^2)
        assert np.isclose(amplitude_determinant(QuantumNumbers(eps, 1, 1, M), 0.5), M * (eps**2 - M**2 - 0.25))


def test_sigma_nonzero_constraints():
    rel = sigma_nonzero_constraints(q_sig(4.0))
    assert rel.phi0_vanishes and np.isclose(rel.E_over_Phi, -5j / 3) and np.isclose(rel.H_over_Phi, 4 / 3)
    with pytest.raises(InconsistentQuantumNumbersError):
        sigma_nonzero_constraints(q_sig(3.9))


def test_sigma_zero_relations_hold_on_mode():
    m = build_mode(QuantumNumbers(5, 0.7, -1.2, 3), "sigma-zero")
    for block in ("Phi", "E"):
        r1, r2 = sigma_zero_relations(m.q, m.fields, block)
        assert r1.max() < 1e-12 and r2.max() < 1e-12


def test_phi0_plugback():
    q = QuantumNumbers(5, 1, 1, 3)
    for b in (1, -1):
        assert np.max(form_plugback(radial_ode(q, "Phi0"), phi0_form(q, b), Z_GRID)) < 1e-12


def test_h1_form_matches_direct_evaluation():
    q = q_sig(4.0)
    Z = substitute_Z(q, Z_GRID)
    assert np.allclose(h1_form(q, 1).evaluate(Z), Z**2 * jv(1 - 4j, Z), rtol=1e-14)


def test_range_error_propagates():
    with pytest.raises(NumericRangeError):
        h1_plugback(q_sig(4.0, 10, 10), 1, np.array([0.0, 1.0, 2.0]))
