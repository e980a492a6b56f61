"""Command-line front end.

::

    superalg spectrum --config job.ini --out results/
    superalg verify   --config job.ini
    superalg p4       --config job.ini
    superalg audit    --config job.ini
    superalg models list

Jobs are described by an INI file; every physical default is 1. Results go
to ``--out`` as JSON (``"schema": 1``) and CSV, each written to a temporary
file and renamed into place. Exit codes: 0 success, 1 verification failure,
2 configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import random
import sys
import tempfile
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .audit import audit_printed_forms
from .models import (
    MODELS,
    CagedParams,
    PainleveParams,
    PoleInGridError,
    caged_axis_certificates,
    caged_system,
    painleve_potential,
    painleve_system,
    rational_p4,
    toy_system,
)
from .oscalg import LadderSystem, build_F, certify_difference_form, random_ladder_system
from .polycore import Poly
from .p4ode import integrate_p4
from .repsolve import algebraic_spectrum, enumerate_reps, validate_family
from .specnum import Grid1D, assemble_2d, compare_spectra, eigen_1d
from .spectrum import SpectrumTable

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration

_CAGED_KEYS = {"omega": Fraction, "kx": int, "ky": int, "l1": Fraction, "l2": Fraction, "hbar": Fraction}
_PAINLEVE_KEYS = {
    "omega1": Fraction, "omega2": Fraction, "m": int, "n": int,
    "alpha1": Fraction, "beta1": Fraction, "alpha2": Fraction, "beta2": Fraction,
    "eps1": int, "eps2": int, "hbar": Fraction,
}
_JOB_KEYS = {"model": str, "mode": str, "n_max": int, "e_max": float, "tol": float, "mirrored": bool}
_VERIFY_KEYS = {"random_systems": int, "seed": int, "audit": bool, "corrupt_q": bool}
_P4_KEYS = {
    "kind": str, "z0": float, "f0": float, "fprime0": float, "x_max": float,
    "points": int, "levels": int, "ode_tol": float, "refinements": int,
}
_SECTIONS = {"job": _JOB_KEYS, "caged": _CAGED_KEYS, "painleve": _PAINLEVE_KEYS,
             "verify": _VERIFY_KEYS, "p4": _P4_KEYS}


@dataclass
class JobConfig:
    model: str = "caged"
    mode: str = "exact"
    n_max: int | None = None
    e_max: float | None = 20.0
    tol: float = 1e-9
    mirrored: bool = False
    params: object = None
    verify: dict = field(default_factory=lambda: {"random_systems": 50, "seed": 0, "audit": True,
                                                  "corrupt_q": False})
    p4: dict = field(default_factory=lambda: {"kind": "minus2x_over3", "z0": None, "f0": None,
                                              "fprime0": None, "x_max": None, "points": 1999,
                                              "levels": 8, "ode_tol": 1e-11,
                                              "refinements": 2})

    def params_dict(self) -> dict:
        if self.params is None:
            return {}
        return {k: (v if isinstance(v, int) else str(v)) for k, v in vars(self.params).items()}

    def system(self) -> LadderSystem:
        if self.model == "toy":
            sys_ = toy_system()
        elif self.model == "caged":
            sys_ = caged_system(self.params)
        else:
            sys_ = painleve_system(self.params)
        return sys_ if self.mode == "exact" else sys_.to_float()


def _convert(section: str, key: str, raw: str, typ):
    try:
        if typ is bool:
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if typ is int:
            return int(raw)
        if typ is Fraction:
            return Fraction(raw.strip())
        if typ is float:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError(raw)
            return v
        return raw.strip()
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {typ.__name__}") from None


def load_config(path: str | None, overrides: dict | None = None) -> JobConfig:
    """Parse and validate a job file; raises :class:`ConfigError`."""
    cp = configparser.ConfigParser(interpolation=None)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from None
    values: dict[str, dict] = {}
    for sec in cp.sections():
        if sec not in _SECTIONS:
            raise ConfigError(f"unknown section [{sec}]")
        keys = _SECTIONS[sec]
        values[sec] = {}
        for k, raw in cp.items(sec):
            if k not in keys:
                raise ConfigError(f"unknown key {k!r} in [{sec}]")
            values[sec][k] = _convert(sec, k, raw, keys[k])

    cfg = JobConfig()
    job = values.get("job", {})
    for k, v in job.items():
        setattr(cfg, k, v)
    for k, v in (overrides or {}).items():
        if v is not None:
            setattr(cfg, k, v)
    if cfg.model not in MODELS:
        raise ConfigError(f"model must be one of {sorted(MODELS)}, not {cfg.model!r}")
    if cfg.mode not in ("exact", "float"):
        raise ConfigError(f"mode must be 'exact' or 'float', not {cfg.mode!r}")
    if cfg.n_max is not None and cfg.n_max < 0:
        raise ConfigError("n_max must be >= 0")
    if cfg.tol <= 0:
        raise ConfigError("tol must be positive")
    if cfg.n_max is None and cfg.e_max is None:
        raise ConfigError("one of n_max, e_max is required")
    try:
        if cfg.model == "caged":
            cfg.params = CagedParams(**values.get("caged", {}))
        elif cfg.model == "painleve":
            cfg.params = PainleveParams(**values.get("painleve", {}))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid {cfg.model} parameters: {exc}") from None
    cfg.verify.update(values.get("verify", {}))
    cfg.p4.update(values.get("p4", {}))
    if cfg.verify["random_systems"] < 0:
        raise ConfigError("random_systems must be >= 0")
    kind = cfg.p4["kind"]
    if kind not in ("minus2x", "minus2x_over3", "one_over_x", "ic"):
        raise ConfigError(f"p4 kind must be a rational solution name or 'ic', not {kind!r}")
    if kind == "ic" and any(cfg.p4[k] is None for k in ("z0", "f0", "fprime0")):
        raise ConfigError("p4 kind = ic needs z0, f0 and fprime0")
    if cfg.p4["points"] < 3 or cfg.p4["levels"] < 1 or cfg.p4["ode_tol"] <= 0 or cfg.p4["refinements"] < 0:
        raise ConfigError("p4 needs points >= 3, levels >= 1, ode_tol > 0 and refinements >= 0")
    return cfg


# ---------------------------------------------------------------------------
# output


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def spectrum_csv(table: SpectrumTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["E", "mult"])
    for lv in table:
        w.writerow([repr(float(lv.energy)), lv.multiplicity])
    return buf.getvalue()


def _emit(out: Path, files: dict[str, str]) -> None:
    for name in sorted(files):
        write_atomic(out / name, files[name])


def load_result(path: str | Path) -> dict:
    """Read an emitted JSON file; spectrum sections come back as tables."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    for key in ("spectrum", "algebraic_spectrum", "numeric_spectrum"):
        if key in doc:
            doc[key] = SpectrumTable.from_dict(doc[key])
    return doc


def _header(cfg: JobConfig, command: str) -> dict:
    return {"schema": SCHEMA, "command": command, "model": cfg.model, "mode": cfg.mode,
            "params": cfg.params_dict(), "version": __version__}


# ---------------------------------------------------------------------------
# commands


def cmd_spectrum(cfg: JobConfig) -> tuple[int, dict[str, str]]:
    sys_ = cfg.system()
    exact = cfg.mode == "exact"
    e_max = Fraction(cfg.e_max) if (exact and cfg.e_max is not None) else cfg.e_max
    reps = enumerate_reps(sys_, cfg.n_max, e_max=e_max, exact=exact, mirrored=cfg.mirrored)
    table = algebraic_spectrum(sys_, cfg.n_max, e_max, exact=exact, reps=reps)
    doc = _header(cfg, "spectrum")
    doc.update({
        "n_max": cfg.n_max,
        "e_max": cfg.e_max,
        "families": [f.to_dict() for f in reps],
        "skipped_complex_branches": reps.skipped_complex,
        "spectrum": table.to_dict(),
    })
    return EXIT_OK, {"spectrum.json": _json_text(doc), "spectrum.csv": spectrum_csv(table)}


def cmd_verify(cfg: JobConfig) -> tuple[int, dict[str, str]]:
    if cfg.mode != "exact":
        raise ConfigError("verify runs in exact mode only")
    certs = []
    sys_ = cfg.system()
    if cfg.model == "caged":
        # negative control: a Q perturbed by z/7 must fail the commutator check
        bad_Q = sys_.Q + Poly([0, Fraction(1, 7)]) if cfg.verify["corrupt_q"] else None
        for axis in ("x", "y"):
            Q = bad_Q if axis == "x" else None
            certs += [c.to_dict() for c in caged_axis_certificates(cfg.params, axis, Q)]
        if bad_Q is not None:
            c = certify_difference_form(sys_, F=build_F(sys_.with_Q(bad_Q)))
            certs.append(dict(c.to_dict(), name="difference_form[corrupted F]"))
    certs.append(certify_difference_form(sys_).to_dict())

    rng = random.Random(cfg.verify["seed"])
    t0 = time.perf_counter()
    rand = [certify_difference_form(random_ladder_system(rng)) for _ in range(cfg.verify["random_systems"])]
    certs.append({
        "name": f"difference_form[random x{len(rand)}]",
        "passed": all(c.passed for c in rand),
        "residual": max((c.residual for c in rand), default=0.0),
        "detail": f"seed={cfg.verify['seed']} seconds={time.perf_counter() - t0:.3f}",
    })

    e_max = Fraction(cfg.e_max) if cfg.e_max is not None else None
    reps = enumerate_reps(sys_, cfg.n_max, e_max=e_max, exact=True, mirrored=cfg.mirrored)
    violations = []
    for fam in reps:
        violations += validate_family(sys_, fam)
    certs.append({
        "name": "representation_conditions",
        "passed": not violations,
        "residual": float(len(violations)),
        "detail": "; ".join(violations[:10]) or f"{len(reps)} families re-checked",
    })
    doc = _header(cfg, "verify")
    doc["certificates"] = certs
    doc["passed"] = all(c["passed"] for c in certs)
    if cfg.verify["audit"] and cfg.model in ("caged", "painleve", "toy"):
        doc["audit"] = audit_printed_forms(cfg.model, cfg.params).to_dict()
    return (EXIT_OK if doc["passed"] else EXIT_FAIL), {"verify.json": _json_text(doc)}


def cmd_audit(cfg: JobConfig) -> tuple[int, dict[str, str]]:
    doc = _header(cfg, "audit")
    doc["audit"] = audit_printed_forms(cfg.model, cfg.params).to_dict()
    return EXIT_OK, {"audit.json": _json_text(doc)}


def _reference_potential(kind: str, p: PainleveParams, axis: str):
    omega, _, _, eps = p.axis(axis)
    w, hb = float(omega), float(p.hbar)
    if kind == "minus2x_over3":
        return lambda x: (w / 3) ** 2 * x**2 / 2
    if kind == "minus2x":
        return lambda x: w**2 * x**2 / 2 - 2 / 3 * eps * hb * w
    return None


def cmd_p4(cfg: JobConfig) -> tuple[int, dict[str, str]]:
    if cfg.model != "painleve":
        raise ConfigError("p4 needs model = painleve")
    p: PainleveParams = cfg.params
    opts = cfg.p4
    kind = opts["kind"]
    hb = float(p.hbar)
    files: dict[str, str] = {}
    doc = _header(cfg, "p4")
    doc["p4"] = {k: opts[k] for k in sorted(opts)}
    levels_1d = {}
    for axis in ("x", "y"):
        omega, alpha, beta, _ = p.axis(axis)
        w = float(omega)
        x_max = opts["x_max"] or 1.5 * math.sqrt(18 * hb * (opts["levels"] + 1) / w)
        zlim = math.sqrt(w / hb) * x_max * 1.01
        if kind == "ic":
            traj = integrate_p4(alpha, beta, opts["z0"], opts["f0"], opts["fprime0"],
                                (min(-zlim, opts["z0"]), max(zlim, opts["z0"])), opts["ode_tol"])
            f, fp, poles = traj.f, traj.fprime, traj.poles
            files[f"p4_trajectory_{axis}.csv"] = traj.to_csv()
            doc[f"trajectory_{axis}"] = traj.metadata()
        else:
            sol = rational_p4(kind)
            if (sol.alpha, sol.beta) != (alpha, beta):
                raise ConfigError(
                    f"{kind} solves alpha={sol.alpha}, beta={sol.beta}; axis {axis} has "
                    f"alpha={alpha}, beta={beta}"
                )
            f, fp, poles = sol.f, sol.fprime, sol.poles
        grid = Grid1D(-x_max, x_max, opts["points"])
        try:
            V = _potential(p, axis, f, fp, poles)
            V(grid.nodes)
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                res = eigen_1d(V, grid, opts["levels"], hb, opts["refinements"])
        except PoleInGridError as exc:
            doc["pole_report"] = {"axis": axis, "poles_x": [float(q) for q in exc.poles]}
            doc["passed"] = False
            return EXIT_FAIL, {"p4.json": _json_text(doc), **files}
        ref = _reference_potential(kind, p, axis)
        entry = {
            "levels": [float(v) for v in res.levels],
            "richardson_estimate": [float(v) for v in res.richardson_estimate],
            "x_max": x_max,
            "warnings": [str(c.message) for c in caught],
        }
        if ref is not None:
            xs = grid.nodes
            entry["potential_max_dev"] = float(np.max(np.abs(V(xs) - ref(xs))))
        doc[f"numeric_{axis}"] = entry
        levels_1d[axis] = list(res.levels)

    ex, ey = levels_1d["x"], levels_1d["y"]
    cut = min(ex[-1] + ey[0], ex[0] + ey[-1])
    numeric = assemble_2d(ex, ey, cut * (1 - 1e-9), merge_tol=cfg.tol)
    sys_ = cfg.system()
    exact = cfg.mode == "exact"
    alg = _algebraic_at_least(sys_, len(numeric), exact)
    report = compare_spectra(numeric, alg.first(len(numeric)), cfg.tol)
    doc["numeric_spectrum"] = numeric.to_dict()
    doc["algebraic_spectrum"] = alg.first(len(numeric)).to_dict()
    doc["comparison"] = report.to_dict()
    doc["passed"] = report.offset_passed
    files["p4_spectrum.csv"] = spectrum_csv(numeric)
    files["p4.json"] = _json_text(doc)
    return (EXIT_OK if report.offset_passed else EXIT_FAIL), files


def _potential(p, axis, f, fp, poles):
    def V(x):
        return painleve_potential(p, axis, f, fp, x, poles)

    return V


def _algebraic_at_least(sys_: LadderSystem, count: int, exact: bool) -> SpectrumTable:
    e_max = 4 * float(sys_.lam) * (count + 1)
    for _ in range(12):
        E = Fraction(e_max) if exact else e_max
        table = algebraic_spectrum(sys_, E_max=E, exact=exact)
        if len(table) >= count:
            return table
        e_max *= 2
    return table


def cmd_models_list() -> tuple[int, str]:
    lines = [f"{name}\t{desc}" for name, desc in sorted(MODELS.items())]
    return EXIT_OK, "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI job file")
    common.add_argument("--mode", choices=("exact", "float"))
    common.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")
    common.add_argument("--nmax", type=int, metavar="INT", help="largest N per branch")
    common.add_argument("--emax", type=float, metavar="FLOAT", help="energy cut-off")
    common.add_argument("--tol", type=float, metavar="FLOAT", help="float comparison tolerance")

    parser = argparse.ArgumentParser(prog="superalg", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="representations and energy levels")
    sub.add_parser("verify", parents=[common], help="exact certificates and audit")
    sub.add_parser("p4", parents=[common], help="Painleve IV potentials and numeric spectra")
    sub.add_parser("audit", parents=[common], help="closed forms against the engine")
    models = sub.add_parser("models", help="model catalog")
    models.add_argument("action", choices=("list",))
    return parser


COMMANDS = {"spectrum": cmd_spectrum, "verify": cmd_verify, "p4": cmd_p4, "audit": cmd_audit}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    if args.command == "models":
        code, text = cmd_models_list()
        sys.stdout.write(text)
        return code
    try:
        cfg = load_config(args.config, {"mode": args.mode, "n_max": args.nmax,
                                        "e_max": args.emax, "tol": args.tol})
        code, files = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(Path(args.out), files)
    for name in sorted(files):
        print(Path(args.out) / name)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
