"""
Command-line entry point ``eit``.

    eit run [SCENARIO.json] [--preset NAME] [--out DIR] [--points N]
            [--prominence P] [--format csv|json]
    eit verify
    eit presets

``run`` writes ``spectrum.csv`` (or ``spectrum.json``), ``dips.json`` and
``metadata.json`` into the output directory. Exit codes: 0 success,
1 invalid scenario, 2 numerical failure, 3 I/O failure.
"""

import argparse
from dataclasses import replace
import json
import math
from pathlib import Path
import sys

import numpy as np

from . import __version__
from .errors import EITError, NetlistError
from .presets import get_preset, preset_names
from .scenario import ScenarioError, analyse, default_reference, scenario_from_dict

__all__ = ["main", "run", "EXIT_OK", "EXIT_INVALID", "EXIT_NUMERIC", "EXIT_IO"]

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

CONVENTIONS = {
    "phasor": "q(t) = Re[Q exp(-i w t)]",
    "admittance": "G = 1/R, Y_C = -i w C, Y_L = i/(w L)",
    "complex_power": "S = P + iQ from amplitude phasors (no 1/2), Q > 0 for inductive loads",
    "absorption": {"mech": "Im chi, chi = N e x1 / F0",
                   "circuit": "P_R, active power delivered by the source"},
    "dispersion": {"mech": "Re chi", "circuit": "P_X, reactive power delivered by the source"},
    "detuning": {"mech": "delta = reference - omega", "circuit": "delta = omega - reference"},
}


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _load_scenario(args):
    if args.preset and args.scenario:
        raise _Fail(EXIT_INVALID, "give either a scenario file or --preset, not both")
    if args.preset:
        try:
            sc = get_preset(args.preset)
        except KeyError as exc:
            raise _Fail(EXIT_INVALID, exc.args[0]) from None
    elif args.scenario:
        path = Path(args.scenario)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise _Fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _Fail(EXIT_INVALID, f"{path}: malformed JSON at line {exc.lineno}, "
                                      f"column {exc.colno}: {exc.msg}") from None
        try:
            sc = scenario_from_dict(doc, base_dir=path.parent)
        except OSError as exc:
            raise _Fail(EXIT_IO, f"cannot read netlist: {exc}") from None
        except NetlistError as exc:
            raise _Fail(EXIT_INVALID, f"netlist {exc}") from None
        except ScenarioError as exc:
            raise _Fail(EXIT_INVALID, f"{path}: {exc}") from None
    else:
        raise _Fail(EXIT_INVALID, "no scenario: give a scenario file or --preset NAME")
    if args.points is not None:
        if args.points < 2:
            raise _Fail(EXIT_INVALID, "--points must be at least 2")
        sc = sc.with_points(args.points)
    overrides = {}
    if args.prominence is not None:
        if not 0 < args.prominence < 1:
            raise _Fail(EXIT_INVALID, "--prominence must lie in (0, 1)")
        overrides["prominence"] = args.prominence
    if args.format is not None:
        overrides["output_format"] = args.format
    if overrides:
        sc = replace(sc, **overrides)
    return sc


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _metadata(sc, spectrum, report):
    meta = {
        "eitsim_version": __version__,
        "scenario": sc.to_dict(),
        "preset": sc.name,
        "grid": {"points": len(spectrum), "start": float(spectrum.omegas[0]),
                 "stop": float(spectrum.omegas[-1])},
        "reference": {"omega": float(spectrum.reference)},
        "conventions": CONVENTIONS,
        "analysis": {"prominence": sc.prominence, "nested": sc.nested,
                     "depth": "prominence / lower flanking maximum",
                     "fwhm": "full width at half depth, linear interpolation"},
        "columns": ["omega", "delta", *spectrum.columns],
        "dip_count": report.count,
    }
    if sc.model == "mech":
        meta["normalization"] = {
            "drive_accel": spectrum.metadata["drive_accel"],
            "note": "drive_accel defaults to gamma1*omega1, giving unit uncoupled "
                    "absorption at the line centre",
        }
        meta["reference"]["meaning"] = "probe oscillator frequency omega1"
    else:
        meta["normalization"] = {"note": "source amplitude Vs as given; powers in watts "
                                         "for amplitude (not RMS) phasors"}
        if sc.reference is None and sc.model == "rlc-analytic":
            meta["reference"]["meaning"] = ("loop-1 resonance 1/sqrt(L1*C*C1/(C+C1)) "
                                            "with a single coupling capacitor")
        elif sc.reference is None:
            meta["reference"]["meaning"] = "none (delta = omega)"
        else:
            meta["reference"]["meaning"] = ("loop-1 resonance with a single coupling "
                                            "capacitor" if sc.name in preset_names() else "user supplied")
    if "resistor_power" in spectrum.metadata:
        meta["resistor_power_columns"] = sorted(spectrum.metadata["resistor_power"])
    return _jsonable(meta)


def run(sc, out_dir):
    """Evaluate and analyse ``sc`` and write the artifacts to ``out_dir``."""
    spectrum, report = analyse(sc)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if sc.output_format == "csv":
            with open(out / "spectrum.csv", "w", encoding="utf-8", newline="") as fh:
                spectrum.to_csv(fh)
        else:
            (out / "spectrum.json").write_text(spectrum.to_json() + "\n", encoding="utf-8")
        (out / "dips.json").write_text(report.to_json() + "\n", encoding="utf-8")
        meta = _metadata(sc, spectrum, report)
        (out / "metadata.json").write_text(json.dumps(meta, indent=1) + "\n", encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write to {out}: {exc.strerror or exc}") from None
    return spectrum, report


def _cmd_run(args):
    sc = _load_scenario(args)
    out = args.out or sc.output_path or (f"eit-out/{sc.name}" if sc.name else "eit-out")
    try:
        spectrum, report = run(sc, out)
    except (ScenarioError, NetlistError) as exc:
        raise _Fail(EXIT_INVALID, str(exc)) from None
    except ArithmeticError as exc:
        raise _Fail(EXIT_NUMERIC, f"numerical failure: {exc}") from None
    except ValueError as exc:
        raise _Fail(EXIT_INVALID, str(exc)) from None
    where = ", ".join(f"{d.omega:.6g}" for d in report.dips) or "none"
    print(f"{sc.name or 'scenario'}: {report.classification}, dips at omega = {where}")
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"wrote {Path(out) / ('spectrum.' + sc.output_format)}, dips.json, metadata.json")
    return EXIT_OK


def _parse_perturb(items):
    out = {}
    for item in items or ():
        try:
            name, assign = item.split(":", 1)
            key, value = assign.split("=", 1)
            out.setdefault(name, {})[key] = float(value)
        except ValueError:
            raise _Fail(EXIT_INVALID, f"--perturb expects PRESET:NAME=VALUE, got {item!r}") from None
    return out


def _cmd_verify(args):
    from .verify import format_table, run_checks
    try:
        checks = run_checks(perturb=_parse_perturb(args.perturb),
                            time_domain=not args.no_time_domain)
    except EITError as exc:
        print(f"verify aborted: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(format_table(checks))
    return EXIT_NUMERIC if any(c.failed for c in checks) else EXIT_OK


def _cmd_presets(args):
    for name in preset_names():
        sc = get_preset(name)
        print(f"{name:<12} {sc.model:<13} reference {default_reference(sc):.6g}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the invalid-scenario code, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="eit", description=__doc__.split("\n\n")[0].strip())
    ap.add_argument("--version", action="version", version=f"eitsim {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="evaluate a scenario file or preset")
    r.add_argument("scenario", nargs="?", help="scenario JSON file")
    r.add_argument("--preset", help="named preset (see `eit presets`)")
    r.add_argument("--out", help="output directory")
    r.add_argument("--points", type=int, help="override the number of sweep points")
    r.add_argument("--prominence", type=float, help="minimum relative dip depth")
    r.add_argument("--format", choices=("csv", "json"), help="spectrum file format")
    r.set_defaults(func=_cmd_run)
    v = sub.add_parser("verify", help="run the oracle cross-check matrix")
    v.add_argument("--perturb", action="append", metavar="PRESET:NAME=VALUE",
                   help="alter a component on the closed-form side (self-test)")
    v.add_argument("--no-time-domain", action="store_true", help="skip RK4 checks")
    v.set_defaults(func=_cmd_verify)
    p = sub.add_parser("presets", help="list the built-in presets")
    p.set_defaults(func=_cmd_presets)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"eit: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
