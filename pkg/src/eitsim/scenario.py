"""
Scenario documents: what to simulate, over which grid, and how to analyse it.

A scenario is a JSON object (schema in ``data/scenario.schema.json``)::

    {"model": "mech" | "rlc-analytic" | "netlist",
     "parameters": {...},              # mech / rlc-analytic
     "netlist": "...", "netlist_path": "...",   # netlist (one of the two)
     "sweep": {"start": .., "stop": .., "points": .., "scale": "lin"},
     "reference": 1.2e5,               # optional detuning reference, rad/s
     "analysis": {"prominence": 0.05, "nested": true},
     "output": {"path": "out", "format": "csv"}}

Mechanical parameters are either the modal form (``omega1_sq`` ...) or the
detuning form (``omega1``, ``Omega_c``, ``Omega_r``, ``gamma1..3``,
``delta_c``, ``delta_r``); ``drive_accel`` defaults to the value giving unit
uncoupled absorption at the line centre. Circuit parameters are the
:class:`~eitsim.circuits.CircuitParams` fields plus an optional ``switch``
(ohms, or ``"open"``) in series with loop 2 of a two-loop circuit.
"""

from dataclasses import dataclass, field, replace
import math
from pathlib import Path

import numpy as np

from .analysis import DEFAULT_PROMINENCE, make_grid, resonance_frequency, detect_dips
from .circuits import CircuitParams, power_spectrum
from .mna import ac_sweep
from .netlist import parse_netlist
from .oscillators import ModalParams, mech_response, susceptibility_from_response, unit_peak_drive
from .spectrum import Spectrum, MECH_COLUMNS, CIRCUIT_COLUMNS

__all__ = ["Scenario", "ScenarioError", "scenario_from_dict", "build_spectrum",
           "analyse", "MODELS"]

MODELS = ("mech", "rlc-analytic", "netlist")
_MODAL_KEYS = ("omega1_sq", "omega2_sq", "omega3_sq", "Omega_c_sq", "Omega_r_sq",
               "gamma1", "gamma2", "gamma3")
_DETUNING_KEYS = ("omega1", "Omega_c", "Omega_r", "gamma1", "gamma2", "gamma3")
_MECH_EXTRA = ("delta_c", "delta_r", "drive_accel", "N_density", "e_charge", "F0")
_CIRCUIT_KEYS = ("R1", "L1", "C1", "C", "R2", "L2", "C2", "R3", "L3", "C3", "Vs")


class ScenarioError(ValueError):
    """Scenario document is malformed or inconsistent."""


@dataclass(frozen=True)
class Scenario:
    model: str
    parameters: dict = field(default_factory=dict)
    netlist: str = None
    sweep: dict = None
    reference: float = None
    prominence: float = DEFAULT_PROMINENCE
    nested: bool = True
    output_path: str = None
    output_format: str = "csv"
    name: str = None

    def with_points(self, n):
        if self.model == "netlist" and self.sweep is None:
            net = parse_netlist(self.netlist)
            s = net.sweep
            sweep = {"start": s.start, "stop": s.stop, "points": n, "scale": s.scale}
        else:
            sweep = dict(self.sweep, points=n)
        return replace(self, sweep=sweep)

    def to_dict(self):
        d = {"model": self.model}
        if self.model == "netlist":
            d["netlist"] = self.netlist
        else:
            d["parameters"] = dict(self.parameters)
        if self.sweep is not None:
            d["sweep"] = dict(self.sweep)
        if self.reference is not None:
            d["reference"] = self.reference
        d["analysis"] = {"prominence": self.prominence, "nested": self.nested}
        d["output"] = {"format": self.output_format}
        if self.output_path:
            d["output"]["path"] = self.output_path
        return d


def _number(d, key, where):
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ScenarioError(f"{where}.{key} must be a finite number, got {v!r}")
    return float(v)


def _check_sweep(sw):
    if not isinstance(sw, dict):
        raise ScenarioError("sweep must be an object")
    for key in ("start", "stop", "points"):
        if key not in sw:
            raise ScenarioError(f"sweep.{key} is required")
    scale = sw.get("scale", "lin")
    pts = sw["points"]
    if isinstance(pts, bool) or not isinstance(pts, int):
        raise ScenarioError("sweep.points must be an integer")
    out = {"start": _number(sw, "start", "sweep"), "stop": _number(sw, "stop", "sweep"),
           "points": pts, "scale": scale}
    try:
        make_grid(out["start"], out["stop"], pts, scale)
    except ValueError as exc:
        raise ScenarioError(f"invalid sweep: {exc}") from None
    return out


def _check_params(model, params):
    if not isinstance(params, dict):
        raise ScenarioError("parameters must be an object")
    if model == "mech":
        allowed = set(_MODAL_KEYS) | set(_DETUNING_KEYS) | set(_MECH_EXTRA)
    else:
        allowed = set(_CIRCUIT_KEYS) | {"switch"}
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise ScenarioError(f"unknown parameter(s): {', '.join(unknown)}")
    try:
        if model == "mech":
            _modal(params)
        else:
            _circuit(params)
    except (TypeError, KeyError) as exc:
        raise ScenarioError(f"missing or malformed parameter: {exc}") from None
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def scenario_from_dict(d, base_dir=None):
    """Validate a decoded scenario document."""
    if not isinstance(d, dict):
        raise ScenarioError("scenario must be a JSON object")
    model = d.get("model")
    if model not in MODELS:
        raise ScenarioError(f"model must be one of {MODELS}, got {model!r}")
    has_params = "parameters" in d
    has_net = "netlist" in d or "netlist_path" in d
    if model == "netlist":
        if has_params or not has_net or ("netlist" in d and "netlist_path" in d):
            raise ScenarioError("netlist model needs exactly one of netlist / netlist_path "
                                "and no parameters section")
    elif has_net or not has_params:
        raise ScenarioError(f"{model} model needs a parameters section and no netlist")
    netlist = None
    params = {}
    if model == "netlist":
        if "netlist_path" in d:
            path = Path(d["netlist_path"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            netlist = path.read_text(encoding="utf-8")
        else:
            netlist = d["netlist"]
        if not isinstance(netlist, str):
            raise ScenarioError("netlist must be text")
        parse_netlist(netlist)
    else:
        params = dict(d["parameters"])
        _check_params(model, params)
    sweep = d.get("sweep")
    if sweep is None and model != "netlist":
        raise ScenarioError("sweep section is required")
    if sweep is not None:
        sweep = _check_sweep(sweep)
    an = d.get("analysis", {})
    if not isinstance(an, dict):
        raise ScenarioError("analysis must be an object")
    prom = an.get("prominence", DEFAULT_PROMINENCE)
    if isinstance(prom, bool) or not isinstance(prom, (int, float)) or not 0 < prom < 1:
        raise ScenarioError("analysis.prominence must lie in (0, 1)")
    nested = an.get("nested", True)
    if not isinstance(nested, bool):
        raise ScenarioError("analysis.nested must be true or false")
    out = d.get("output", {})
    if not isinstance(out, dict):
        raise ScenarioError("output must be an object")
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ScenarioError("output.format must be csv or json")
    ref = d.get("reference")
    if ref is not None:
        ref = _number(d, "reference", "scenario")
    return Scenario(model=model, parameters=params, netlist=netlist, sweep=sweep,
                    reference=ref, prominence=float(prom), nested=nested,
                    output_path=out.get("path"), output_format=fmt, name=d.get("name"))


def _modal(params):
    if "omega1_sq" in params:
        p = ModalParams(**{k: float(params[k]) for k in _MODAL_KEYS})
    else:
        p = ModalParams.from_detunings(
            *(float(params[k]) for k in _DETUNING_KEYS),
            delta_c=float(params.get("delta_c", 0.0)),
            delta_r=float(params.get("delta_r", 0.0)))
    return p


def _circuit(params):
    kw = {k: params[k] for k in _CIRCUIT_KEYS if k in params}
    p = CircuitParams(**kw)
    sw = params.get("switch", 0.0)
    if sw == "open":
        sw = math.inf
    if isinstance(sw, bool) or not isinstance(sw, (int, float)) or sw < 0:
        raise ValueError("switch must be a non-negative resistance or 'open'")
    if sw and p.has_loop3:
        raise ValueError("switch applies to the two-loop circuit only")
    return p, float(sw)


def model_objects(sc):
    """Parameter objects behind a scenario (for metadata and cross-checks)."""
    if sc.model == "mech":
        return _modal(sc.parameters)
    if sc.model == "rlc-analytic":
        return _circuit(sc.parameters)
    return parse_netlist(sc.netlist)


def default_reference(sc):
    if sc.reference is not None:
        return sc.reference
    if sc.model == "mech":
        return _modal(sc.parameters).omega1
    if sc.model == "rlc-analytic":
        p, _ = _circuit(sc.parameters)
        return resonance_frequency(p, coupling_caps=1)
    return 0.0


def _grid(sc):
    s = sc.sweep
    return make_grid(s["start"], s["stop"], s["points"], s["scale"])


def build_spectrum(sc):
    """Evaluate the scenario's model over its sweep."""
    ref = default_reference(sc)
    if sc.model == "mech":
        p = _modal(sc.parameters)
        drive = float(sc.parameters.get("drive_accel", unit_peak_drive(p)))
        w = _grid(sc)
        x = mech_response(p, drive, w)
        chi = susceptibility_from_response(
            x, float(sc.parameters.get("N_density", 1.0)),
            float(sc.parameters.get("e_charge", 1.0)), float(sc.parameters.get("F0", 1.0)))
        return Spectrum(w, chi.imag, chi.real, x, ref, "mech", MECH_COLUMNS,
                        {"drive_accel": drive})
    if sc.model == "rlc-analytic":
        p, sw = _circuit(sc.parameters)
        w = _grid(sc)
        P_R, P_X, I = power_spectrum(p, w, switch=sw)
        return Spectrum(w, P_R, P_X, I, ref, "circuit", CIRCUIT_COLUMNS)
    net = parse_netlist(sc.netlist)
    w = _grid(sc) if sc.sweep is not None else None
    return ac_sweep(net, omegas=w, reference=ref)


def analyse(sc, spectrum=None):
    spectrum = build_spectrum(sc) if spectrum is None else spectrum
    return spectrum, detect_dips(spectrum, sc.prominence, nested=sc.nested)
