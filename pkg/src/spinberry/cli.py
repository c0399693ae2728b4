"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import runs
from .berry import DEFAULT_SAMPLES
from .errors import NumericalError, SpinBerryError
from .operators import eig_hermitian
from .report import emit_report, round_sig, write_text
from .systems import PRESETS, SystemSpec, hamiltonian

log = logging.getLogger("spinberry")

SYSTEM_CHOICES = ("two-spin", "two-momenta", "spin-half", "quadrupole")
_SPEC_FLAGS = {"j1": "j1", "j2": "j2", "G": "G", "g1": "g1", "g2": "g2", "b0": "B0", "j": "j", "K": "K"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, theta: bool = True) -> None:
    g = p.add_argument_group("system")
    g.add_argument("--system", choices=SYSTEM_CHOICES, default=None)
    g.add_argument("--preset", choices=sorted(PRESETS), default=None,
                   help="fill j1, j2, g1, g2 with signed conventional values")
    g.add_argument("--config", metavar="PATH", help="JSON with SystemSpec keys and run parameters")
    for flag in ("j1", "j2", "G", "g1", "g2", "b0", "j", "K"):
        g.add_argument(f"--{flag}", type=float, default=None)
    r = p.add_argument_group("run")
    if theta:
        r.add_argument("--theta", type=float, default=None, help="cone half-angle (radians unless --degrees)")
    r.add_argument("--degrees", action="store_true", help="interpret angles in degrees")
    r.add_argument("--points", type=int, default=None, help=f"loop samples (default {DEFAULT_SAMPLES})")
    r.add_argument("--format", choices=("json", "csv"), default=None)
    r.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    r.add_argument("--timing", action="store_true", help="include wall time in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinberry", description="Berry phases and holonomies of coupled angular momenta")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("berry", help="Wilson-loop phases and the -m*Omega comparison")
    _common(p)
    p.add_argument("--no-resolve", action="store_true",
                   help="keep degenerate blocks whole instead of splitting by the axis projection")

    p = sub.add_parser("holonomy", help="Wilczek-Zee holonomies of degenerate blocks")
    _common(p)

    p = sub.add_parser("evolve", help="time-evolution cross-check for one band")
    _common(p)
    p.add_argument("--band", type=int, default=None, help="block index in ascending energy")
    p.add_argument("--omega", type=float, default=None, help="drive frequency (default gap/500)")
    p.add_argument("--steps", type=int, default=None, help="time steps (default 20 * points)")

    p = sub.add_parser("sweep", help="theta grid, one row per band")
    _common(p, theta=False)
    p.add_argument("--thetas", default=None, help="comma-separated angles")
    p.add_argument("--theta-min", type=float, default=None)
    p.add_argument("--theta-max", type=float, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("tables", help="printed vs computed phase tables")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--points", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--G", type=float, default=1.0)
    p.add_argument("--b0", type=float, default=1.0)
    p.add_argument("--no-adiabatic", action="store_true", help="skip the time-evolution column")
    p.add_argument("--output", "-o", default=None)

    p = sub.add_parser("spectrum", help="eigenvalues at one field direction")
    _common(p)
    p.add_argument("--phi", type=float, default=0.0)
    return parser


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"--config: {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("--config: top level must be an object")
    return data


def _angle(x: float | None, degrees: bool) -> float | None:
    return None if x is None else (math.radians(x) if degrees else x)


def resolve_spec(args, config: dict) -> SystemSpec:
    fields = {k: config[k] for k in SystemSpec.__dataclass_fields__ if k in config}
    system = args.system or config.get("system")
    if system is None:
        system = "quadrupole" if fields.get("kind") == "quadrupole" else "two-spin"
    if system == "quadrupole":
        fields["kind"] = "quadrupole"
    else:
        fields["kind"] = "two_momenta"
        if system == "spin-half":
            fields.update(j1=0.5, j2=0.0, G=fields.get("G", 0.0), g2=fields.get("g2", 0.0))
        elif system == "two-spin":
            fields.update(j1=0.5, j2=0.5)
    preset = args.preset or config.get("preset")
    if preset:
        if system == "quadrupole":
            raise UsageError("--preset applies to two-momenta systems only")
        fields.update(PRESETS[preset])
    for flag, key in _SPEC_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            fields[key] = value
    if system == "two-spin" and (fields.get("j1") != 0.5 or fields.get("j2") != 0.5):
        raise UsageError("--system two-spin fixes j1 = j2 = 1/2; use --system two-momenta")
    return SystemSpec.from_dict(fields)


def _param(args, config, name, cfg_key=None, default=None):
    value = getattr(args, name, None)
    if value is None:
        value = config.get(cfg_key or name, default)
    return value


def _theta(args, config) -> float:
    theta = _angle(getattr(args, "theta", None), args.degrees)
    if theta is None:
        theta = config.get("theta")
    if theta is None:
        raise UsageError("--theta is required")
    return float(theta)


def _thetas(args, config) -> list[float]:
    if args.thetas:
        try:
            vals = [float(t) for t in args.thetas.split(",") if t.strip()]
        except ValueError as exc:
            raise UsageError(f"--thetas: {exc}") from exc
        return [_angle(v, args.degrees) for v in vals]
    if "thetas" in config and args.theta_min is None:
        return [float(t) for t in config["thetas"]]
    lo, hi, n = args.theta_min, args.theta_max, args.count
    if lo is None or hi is None or n is None:
        raise UsageError("sweep needs --thetas or all of --theta-min, --theta-max, --count")
    if n < 1:
        raise UsageError("--count must be positive")
    return [_angle(float(t), args.degrees) for t in np.linspace(lo, hi, n)]


def _dispatch(args) -> int:
    if args.command == "tables":
        theta = _angle(args.theta, args.degrees)
        out = runs.tables(theta, args.points, G=args.G, B0=args.b0, adiabatic=not args.no_adiabatic)
        write_text(json.dumps(round_sig(out), indent=2) + "\n", args.output)
        return 0

    config = _load_config(args.config)
    spec = resolve_spec(args, config)
    n_samples = int(_param(args, config, "points", "n_samples", DEFAULT_SAMPLES))
    if n_samples < 8:
        raise UsageError("--points must be at least 8")
    fmt_name = _param(args, config, "format", default="csv" if args.command == "sweep" else "json")

    if args.command == "spectrum":
        theta = _theta(args, config)
        values = eig_hermitian(hamiltonian(spec, theta, args.phi)).values
        payload = {"spec": spec.to_dict(), "theta": theta, "phi": args.phi, "eigenvalues": values.tolist()}
        if fmt_name == "csv":
            text = "index,energy\n" + "".join(f"{i},{v:.12g}\n" for i, v in enumerate(values))
        else:
            text = json.dumps(round_sig(payload), indent=2) + "\n"
        write_text(text, args.output)
        return 0

    if args.command == "sweep":
        reports = runs.sweep_reports(spec, _thetas(args, config), n_samples, jobs=args.jobs)
        emit_report(reports, fmt_name, args.output)
        return 0

    theta = _theta(args, config)
    if args.command == "berry":
        report = runs.berry_report(spec, theta, n_samples, resolve=not args.no_resolve, timing=args.timing)
    elif args.command == "holonomy":
        report = runs.holonomy_report(spec, theta, n_samples, timing=args.timing)
    elif args.command == "evolve":
        band = _param(args, config, "band")
        if band is None:
            raise UsageError("--band is required for evolve")
        omega = _param(args, config, "omega")
        steps = _param(args, config, "steps", "n_steps")
        report = runs.evolve_report(spec, theta, int(band), omega, steps, n_samples, timing=args.timing)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown command {args.command}")
    emit_report(report, fmt_name, args.output)
    return 0


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(
                ["berry", "holonomy", "evolve", "sweep", "tables", "spectrum"]))
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
        return _dispatch(args)
    except UsageError as exc:
        print(f"spinberry: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"spinberry: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (SpinBerryError, ValueError, IndexError) as exc:
        print(f"spinberry: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"spinberry: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
