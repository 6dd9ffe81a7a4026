"""Acceptance criteria; each test prints one PASS/FAIL line."""
import cmath
import math
import time

import numpy as np
import pytest

from conftest import record
from dkspin1 import dk_algebra, geometry
from dkspin1.helicity import commutator_residual
from dkspin1.modes import (
    amplitude_relation_errors,
    build_mode,
    gauge_relation_errors,
    lorentz_relative,
    residual_scan,
)
from dkspin1.radial import companion_h3, form_plugback, h1_plugback, phi0_form, radial_ode
from dkspin1.special import bessel_oracle, jv, jvp, wronskian_expected
from dkspin1.special.bessel import MAX_ARG
from dkspin1.wave_system import QuantumNumbers

pytestmark = pytest.mark.acceptance

REF = QuantumNumbers(5.0, 1.0, 1.0, 3.0)
GRID = np.linspace(-2.0, 2.0, 401)


def test_c01_dkp_trilinear():
    t0 = time.perf_counter()
    dk = dk_algebra.build_beta_set()
    dev = dk_algebra.verify_dkp_trilinear(dk)
    elapsed = time.perf_counter() - t0
    ok = dev < 1e-12 and elapsed < 1.0
    record("C1 DKP trilinear algebra", ok, f"max deviation {dev:.2e} over 64 triples in {elapsed:.3f} s")
    assert ok


def test_c02_displayed_identities():
    dk = dk_algebra.build_beta_set()
    devs = dk_algebra.commutator_identity_deviations(dk)
    rows = {k: devs[k] for k in ("J12 = -iS3", "J13 = +iS2", "J23 = -iS1")}
    rows["-S1 J31 + S2 J23 = -S3"] = dk_algebra.helicity_connection_deviation(dk)
    worst = max(rows.values())
    ok = worst < 1e-15
    record("C2 displayed matrix identities", ok, ", ".join(f"{k}: {v:.1e}" for k, v in rows.items()))
    assert ok


def test_c03_geometry():
    rng = np.random.default_rng(3)
    worst = 0.0
    for z in rng.uniform(-3.0, 3.0, 1000):
        d = geometry.christoffel_at(z).christoffel - geometry.christoffel_oracle(z).christoffel
        worst = max(worst, float(np.max(np.abs(d))))
    g = geometry.ricci_rotation_table()
    listed = g[3, 1, 1] == -1.0 and g[2, 3, 2] == 1.0
    antisym = np.array_equal(g, -g.transpose(1, 0, 2))
    # every nonzero entry is a listed one or its (a, b) antisymmetric partner
    allowed = {(3, 1, 1), (1, 3, 1), (2, 3, 2), (3, 2, 2)}
    extra = {tuple(int(i) for i in idx) for idx in zip(*np.nonzero(g))} - allowed
    ok = worst < 1e-6 and listed and antisym and not extra
    record(
        "C3 geometry cross-check",
        ok,
        f"Christoffel max |analytic - FD| {worst:.2e} over 1000 z; "
        f"Ricci table listed={listed} antisymmetric={antisym} extra={sorted(extra)}",
    )
    assert ok


def test_c04_helicity_commutes():
    rng = np.random.default_rng(4)
    dk = dk_algebra.build_beta_set()
    worst = 0.0
    for _ in range(20):
        eps, a, b = rng.uniform(-5.0, 5.0, 3)
        M = rng.uniform(0.0, 5.0)
        worst = max(worst, commutator_residual(QuantumNumbers(eps, a, b, M), dk=dk))
    ok = worst < 1e-10
    record("C4 helicity-wave commutator", ok, f"max residual {worst:.2e} over 20 draws x 90 test fields")
    assert ok


def _c5_draws(n=50):
    rng = np.random.default_rng(5)
    for _ in range(n):
        sigma = rng.uniform(-5.0, 5.0)
        s = 5.0 * (1.0 - rng.uniform())  # (0, 5]
        th = rng.uniform(0.0, 2 * math.pi)
        # keep |Z| = s e^z inside the series regime
        zmax = min(2.0, math.log(0.999 * MAX_ARG / s))
        yield QuantumNumbers(5.0, s * math.cos(th), s * math.sin(th), 3.0, sigma), np.linspace(-2.0, zmax, 201)


def test_c05_radial_plugback():
    h1 = h3 = rt = 0.0
    for q, z in _c5_draws():
        for branch in (1, -1):
            h1 = max(h1, float(np.max(h1_plugback(q, branch, z))))
            c = companion_h3(q, branch, z)
            h3 = max(h3, c.h3_plugback)
            rt = max(rt, c.roundtrip_error)
    ok = h1 < 1e-9 and h3 < 1e-8 and rt < 1e-8
    record(
        "C5 radial plug-back",
        ok,
        f"H1 eq {h1:.2e}, companion H3 eq {h3:.2e}, round trip {rt:.2e} (50 draws, both Bessel branches)",
    )
    assert ok


def test_c06_helicity_modes():
    rows = []
    ok = True
    for branch in ("helicity-plus", "helicity-minus"):
        for bb in (1, -1):
            m = build_mode(REF, branch, bb, GRID)
            res = residual_scan(m, 1e-8).max_residual
            amp = amplitude_relation_errors(m)
            good = res < 1e-8 and max(amp.values()) < 1e-10 and amp["Phi0"] == 0.0
            ok &= good
            rows.append(f"sigma={m.sigma.real:+.0f} J{'+' if bb > 0 else '-'}: res {res:.1e} amp {max(amp.values()):.1e}")
    record("C6 full-mode certification (5,1,1,3)", ok, "; ".join(rows))
    assert ok


def test_c07_sigma_zero():
    ok = True
    rows = []
    for bb in (1, -1):
        m = build_mode(REF, "sigma-zero", bb, GRID)
        plug = float(np.max(form_plugback(radial_ode(m.q, "Phi0"), phi0_form(m.q, bb), GRID)))
        res = residual_scan(m, 1e-8).max_residual
        H_zero = not np.any(m.fields.values[7:10])
        lor = lorentz_relative(m)
        good = plug < 1e-9 and res < 1e-8 and H_zero and lor < 1e-8
        ok &= good
        rows.append(f"J{'+' if bb > 0 else '-'}: Phi0 eq {plug:.1e}, system {res:.1e}, H=0 {H_zero}, Lorentz {lor:.1e}")
    record("C7 sigma=0 massive branch", ok, "; ".join(rows))
    assert ok


def test_c08_massless_gauge():
    q = QuantumNumbers(5.0, 1.0, 1.0, 0.0)
    ok = True
    rows = []
    for bb in (1, -1):
        m = build_mode(q, "massless-gauge", bb, GRID)
        g = gauge_relation_errors(m)
        res = residual_scan(m, 1e-8).max_residual
        good = g["relations"] < 1e-10 and g["E"] == 0.0 and g["H"] == 0.0 and res < 1e-8
        ok &= good
        rows.append(f"J{'+' if bb > 0 else '-'}: relations {g['relations']:.1e}, E=H=0 {g['E'] == g['H'] == 0}, system {res:.1e}")
    record("C8 massless gauge branch", ok, "; ".join(rows))
    assert ok


def bessel_pairs():
    """100 fixed (order, argument) pairs: Re order in [-1, 5.5], |Im order| <= 2.5,
    |arg| in [0.2, 12] over all directions."""
    res = np.linspace(-1.0, 5.5, 10)
    ims = np.linspace(-2.5, 2.5, 10)
    rs = np.geomspace(0.2, 12.0, 10)
    ths = np.linspace(-0.95 * math.pi, math.pi, 10)
    return [
        (complex(res[i], ims[(3 * i + k) % 10]), complex(rs[k] * cmath.exp(1j * ths[(i + 7 * k) % 10])))
        for i in range(10)
        for k in range(10)
    ]


def test_c09_special_functions():
    oracle = wron = rec = 0.0
    for nu, x in bessel_pairs():
        v, d = jv(nu, [x])[0], jvp(nu, [x])[0]
        ov, _ = bessel_oracle(nu, x)
        oracle = max(oracle, abs(v - ov) / abs(ov))
        vm, dm = jv(-nu, [x])[0], jvp(-nu, [x])[0]
        w = v * dm - vm * d
        wron = max(wron, abs(w - wronskian_expected(nu, x)) / max(abs(v * dm), abs(vm * d)))
        lo, hi = jv(nu - 1, [x])[0], jv(nu + 1, [x])[0]
        mid = 2 * nu / x * v
        rec = max(rec, abs(lo + hi - mid) / max(abs(lo), abs(hi), abs(mid)))
    ok = oracle < 1e-10 and wron < 1e-9 and rec < 1e-9
    record(
        "C9 special functions",
        ok,
        f"series vs ODE oracle {oracle:.2e}, Wronskian {wron:.2e}, three-term recurrence {rec:.2e} (100 pairs)",
    )
    assert ok


def test_c10_lorentz_automatic():
    rng = np.random.default_rng(10)
    cases = [REF]
    for _ in range(10):
        M = rng.uniform(0.5, 4.0)
        cases.append(QuantumNumbers(M + rng.uniform(0.2, 3.0), rng.uniform(-2, 2), rng.uniform(-2, 2), M))
    worst, count = 0.0, 0
    for q in cases:
        zmax = min(2.0, math.log(0.999 * MAX_ARG / q.s))
        z = np.linspace(-2.0, zmax, 201)
        for branch in ("helicity-plus", "helicity-minus"):
            for bb in (1, -1):
                m = build_mode(q, branch, bb, z)
                if not residual_scan(m, 1e-8).passed:
                    continue
                count += 1
                worst = max(worst, lorentz_relative(m))
    ok = worst < 1e-10 and count == 4 * len(cases)
    record("C10 Lorentz condition automatic", ok, f"max residual {worst:.2e} over {count} passing sigma != 0 modes")
    assert ok
