"""Command-line front end.

Exit codes: 0 pass, 1 identity/residual failure, 2 inconsistent quantum
numbers, 3 numeric range, 4 I/O.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import dk_algebra, geometry
from .errors import DKError, ExportError, InvalidInputError, SeriesRangeError
from .helicity import commutator_residual
from .modes import (
    build_mode,
    export_mode,
    gauge_relation_errors,
    residual_scan,
)
from .radial import allowed_sigmas
from .special import bessel_j, bessel_oracle
from .special.bessel import MAX_ARG
from .wave_system import QuantumNumbers

EXIT_OK, EXIT_IDENTITY, EXIT_QUANTUM, EXIT_RANGE, EXIT_IO = 0, 1, 2, 3, 4

BRANCH_NAMES = {
    "plus": "helicity-plus",
    "minus": "helicity-minus",
    "zero": "sigma-zero",
    "gauge": "massless-gauge",
}

_COMPLEX_RE = re.compile(r"^\s*[-+0-9.eEij ]+\s*$")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style literals ("2i", "1-1i", "-0.5", "i")."""
    s = str(text).strip().replace(" ", "")
    if not s or not _COMPLEX_RE.match(s):
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")
    s = s.replace("i", "j")
    s = re.sub(r"(^|[+-])j", r"\g<1>1j", s)
    try:
        return complex(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}") from exc


def format_complex(c: complex, digits: int = 12) -> str:
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:.{digits}g}"
    sign = "+" if c.imag >= 0 else "-"
    return f"{c.real:.{digits}g}{sign}{abs(c.imag):.{digits}g}i"


@dataclass
class RunConfig:
    epsilon: float = 5.0
    a: float = 1.0
    b: float = 1.0
    M: float = 3.0
    sigma_branch: str = "plus"
    bessel_branch: int = 1
    z_min: float = -2.0
    z_max: float = 2.0
    samples: int = 401
    tolerance: float = 1e-8
    output: str | None = None
    format: str = "csv"

    def validate(self) -> "RunConfig":
        if self.sigma_branch not in BRANCH_NAMES:
            raise InvalidInputError(f"branch must be one of {sorted(BRANCH_NAMES)}")
        if self.bessel_branch not in (1, -1):
            raise InvalidInputError("bessel branch must be +1 or -1")
        if self.samples < 3:
            raise InvalidInputError("samples must be >= 3")
        if not self.z_min < self.z_max:
            raise InvalidInputError("z_min must be < z_max")
        if not self.tolerance > 0:
            raise InvalidInputError("tolerance must be > 0")
        if self.format not in ("csv", "json"):
            raise InvalidInputError("format must be csv or json")
        zcap = math.hypot(self.a, self.b) * math.exp(self.z_max)
        if zcap > MAX_ARG:
            raise SeriesRangeError(f"max |Z| on the grid is {zcap:.4g} > {MAX_ARG:g}; lower z_max")
        return self

    def quantum_numbers(self) -> QuantumNumbers:
        return QuantumNumbers(self.epsilon, self.a, self.b, self.M)

    def grid(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.samples)


_CONFIG_KEYS = {f.name for f in fields(RunConfig)}
# flag dest -> RunConfig field
_FLAG_TO_FIELD = {
    "epsilon": "epsilon",
    "a": "a",
    "b": "b",
    "mass": "M",
    "branch": "sigma_branch",
    "bessel_branch": "bessel_branch",
    "z_min": "z_min",
    "z_max": "z_max",
    "samples": "samples",
    "tolerance": "tolerance",
    "out": "output",
    "format": "format",
}


def _bessel_branch(text: str) -> int:
    t = str(text).strip().lower()
    if t in ("+", "+1", "1", "plus"):
        return 1
    if t in ("-", "-1", "minus"):
        return -1
    raise argparse.ArgumentTypeError(f"bessel branch must be + or -, got {text!r}")


def load_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ExportError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
        if "bessel_branch" in values:
            values["bessel_branch"] = _bessel_branch(values["bessel_branch"])
    for flag, key in _FLAG_TO_FIELD.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values).validate()


# --- verify -----------------------------------------------------------------

def _verify_suites() -> list[tuple[str, float, float]]:
    """(name, deviation, tolerance) rows."""
    rows = []
    gen = dk_algebra.build_cyclic_generators()
    rows.append(("cyclic generators [tau_i, tau_j] = i tau_k", dk_algebra.generator_algebra_deviation(gen), 1e-15))
    dk = dk_algebra.build_beta_set(gen, check=False)
    dev = dk_algebra.trilinear_deviations(dk)
    worst = max(dev, key=dev.get)
    rows.append((f"DKP trilinear relation (worst triple {worst})", dev[worst], dk_algebra.TRILINEAR_TOL))
    for name, d in dk_algebra.commutator_identity_deviations(dk).items():
        rows.append((f"spin block {name}", d, 1e-15))
    curv = float(np.max(np.abs(dk_algebra.curvature_term(dk) - dk_algebra.curvature_term_displayed(gen))))
    rows.append(("connection term -b1 J31 + b2 J23 block form", curv, 1e-15))
    rows.append(("-S1 J31 + S2 J23 = -S3", dk_algebra.helicity_connection_deviation(dk), 1e-15))

    zs = np.linspace(-3, 3, 61)
    chr_dev = max(
        float(np.max(np.abs(geometry.christoffel_at(z).christoffel - geometry.christoffel_oracle(z).christoffel)))
        for z in zs
    )
    rows.append(("Christoffel symbols vs finite differences", chr_dev, 1e-6))
    ricci = max(
        float(np.max(np.abs(geometry.ricci_rotation_from_tetrad(z) - geometry.ricci_rotation_table()))) for z in zs
    )
    rows.append(("Ricci rotation coefficients from tetrad", ricci, 1e-6))
    rows.append(("tetrad orthonormality", max(geometry.tetrad_orthonormality_defect(z) for z in zs), 1e-14))

    rng = np.random.default_rng(2024)
    comm = 0.0
    for _ in range(5):
        eps, a, b, M = rng.uniform(-5, 5, 4)
        comm = max(comm, commutator_residual(QuantumNumbers(eps, a, b, abs(M)), dk=dk))
    rows.append(("helicity commutator residual", comm, 1e-10))
    return rows


def cmd_verify(args: argparse.Namespace) -> int:
    failed = []
    for name, dev, tol in _verify_suites():
        ok = dev < tol
        print(f"{'PASS' if ok else 'FAIL'}  {name}: max deviation {dev:.3e} (tol {tol:.0e})")
        if not ok:
            failed.append(name)
    if failed:
        print("failing identities: " + "; ".join(failed), file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


# --- mode -------------------------------------------------------------------

def cmd_mode(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    q = cfg.quantum_numbers()
    branch = BRANCH_NAMES[cfg.sigma_branch]
    mode = build_mode(q, branch, cfg.bessel_branch, cfg.grid())
    report = residual_scan(mode, cfg.tolerance)
    print(f"branch: {branch}  bessel order: {format_complex(mode.order)}")
    print(f"sigma = {format_complex(mode.sigma)}")
    print(f"max relative residual = {report.max_residual:.3e} (tol {cfg.tolerance:.0e}) "
          f"{'PASS' if report.passed else 'FAIL'}")
    if branch == "massless-gauge":
        g = gauge_relation_errors(mode)
        ok = g["E"] == 0 and g["H"] == 0 and g["relations"] < 1e-10
        print(f"gauge checks: E=H=0 {'passed' if ok else 'FAILED'}, "
              f"Phi_j/Phi0 relations {g['relations']:.3e}")
        if not ok:
            return EXIT_IDENTITY
    if cfg.output:
        path = export_mode(mode, cfg.format, cfg.output, report)
        print(f"wrote {path}")
    if not report.passed:
        for line in report.failing():
            print("  " + line, file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


# --- sigma table --------------------------------------------------------------

def parse_values(text: str) -> list[float]:
    """"start:stop:num" (inclusive linspace) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be start:stop:num, got {text!r}")
        start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        if num < 1:
            raise argparse.ArgumentTypeError("range needs num >= 1")
        return [float(v) for v in np.linspace(start, stop, num)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad value list {text!r}") from exc


def sigma_table(eps_values, mass_values) -> list[dict]:
    rows = []
    for eps in eps_values:
        for M in mass_values:
            plus, minus = allowed_sigmas(eps, M)
            rows.append({
                "epsilon": eps,
                "M": M,
                "sigma_plus": plus,
                "sigma_minus": minus,
                "zero_branch": eps * eps == M * M,
            })
    return rows


def cmd_sigma_table(args: argparse.Namespace) -> int:
    rows = sigma_table(args.epsilon, args.mass)
    lines = ["epsilon,M,sigma_plus,sigma_minus,flag"]
    for r in rows:
        flag = "zero-branch" if r["zero_branch"] else ""
        lines.append(
            f"{r['epsilon']:.12g},{r['M']:.12g},{format_complex(r['sigma_plus'])},"
            f"{format_complex(r['sigma_minus'])},{flag}"
        )
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise ExportError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


# --- bessel -------------------------------------------------------------------

def cmd_bessel(args: argparse.Namespace) -> int:
    ev = bessel_j(args.order, args.arg)
    print(f"J_{format_complex(ev.order)}({format_complex(ev.argument)}) = {format_complex(ev.value, 16)}")
    print(f"derivative = {format_complex(ev.derivative, 16)}")
    print(f"terms used = {ev.terms_used}, truncation estimate = {ev.truncation_estimate:.3e}")
    if ev.argument != 0:
        ov, _ = bessel_oracle(ev.order, ev.argument)
        delta = abs(ov - ev.value) / max(abs(ev.value), 1e-300)
        print(f"oracle delta (relative) = {delta:.3e}")
    else:
        print("oracle delta: n/a at the origin")
    return EXIT_OK


# --- wiring -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dkspin1", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the algebraic and geometric identity suites")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("mode", help="build, certify and export one mode")
    m.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    m.add_argument("--epsilon", type=float)
    m.add_argument("--a", type=float)
    m.add_argument("--b", type=float)
    m.add_argument("--mass", type=float)
    m.add_argument("--branch", choices=sorted(BRANCH_NAMES))
    m.add_argument("--bessel-branch", type=_bessel_branch, help="+ or - (J_{+order} or J_{-order})")
    m.add_argument("--z-min", type=float)
    m.add_argument("--z-max", type=float)
    m.add_argument("--samples", type=int)
    m.add_argument("--tolerance", type=float)
    m.add_argument("--out")
    m.add_argument("--format", choices=("csv", "json"))
    m.set_defaults(func=cmd_mode)

    s = sub.add_parser("sigma-table", help="tabulate sigma = +-sqrt(eps^2 - M^2)")
    s.add_argument("--epsilon", type=parse_values, required=True, help="start:stop:num or comma list")
    s.add_argument("--mass", type=parse_values, required=True, help="start:stop:num or comma list")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sigma_table)

    b = sub.add_parser("bessel", help="evaluate J_order(arg) with an oracle cross-check")
    b.add_argument("--order", type=parse_complex, required=True)
    b.add_argument("--arg", type=parse_complex, required=True)
    b.set_defaults(func=cmd_bessel)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DKError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
