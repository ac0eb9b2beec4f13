"""
Oracle matrix: the same circuit solved three independent ways.

* ``rlc-netlist``: closed-form loop algebra against nodal analysis of the
  equivalent netlist, on every circuit preset grid.
* ``closed-form``: the loop-1 current against the oscillator-form response of
  the same circuit (a check of the parameter mapping).
* ``time-domain``: RK4 integration to steady state against the closed form,
  for a bare Lorentz oscillator, every circuit preset at its reference
  frequency and every damped mechanical preset (others are reported ``n/a``).
"""

from dataclasses import dataclass
import math

import numpy as np

from .circuits import CircuitParams, circuit_modal, power_spectrum
from .errors import NotApplicable
from .mna import ac_sweep
from .netlist import parse_netlist
from .oscillators import ModalParams, lorentz_response, mech_response, unit_peak_drive
from .presets import _CIRCUIT, _EXPERIMENT, _MECH, CIRCUIT_SWEEP, circuit_netlist, get_preset
from .scenario import _modal
from .timedomain import steady_state_response
from .analysis import make_grid, resonance_frequency

__all__ = ["Check", "run_checks", "format_table", "TOLERANCES"]

TOLERANCES = {"rlc-netlist": 1e-9, "closed-form": 1e-9, "time-domain": 1e-3}
STEPS_PER_PERIOD = 128


@dataclass(frozen=True)
class Check:
    subject: str
    kind: str
    error: float
    tol: float
    status: str
    note: str = ""

    @property
    def failed(self):
        return self.status == "FAIL"


def _status(err, tol):
    return "PASS" if err <= tol else "FAIL"


def _power_error(P_R, P_X, spec):
    """Pointwise error in complex power relative to |S| of the nodal result."""
    S_a = P_R + 1j * P_X
    S_b = spec.absorption + 1j * spec.dispersion
    return float(np.max(np.abs(S_a - S_b) / np.abs(S_b)))


def _circuit_cases():
    for name, values in _CIRCUIT.items():
        p = CircuitParams(**values)
        grid = make_grid(CIRCUIT_SWEEP["start"], CIRCUIT_SWEEP["stop"], CIRCUIT_SWEEP["points"])
        net = circuit_netlist(p, (grid[0], grid[-1], len(grid)))
        yield name, p, 0.0, net, grid
    for name, (values, switch, sweep) in _EXPERIMENT.items():
        p = CircuitParams(**values)
        sc = get_preset(name)
        net = parse_netlist(sc.netlist)
        yield name, p, math.inf if switch == "open" else 0.0, net, net.grid()


def run_checks(perturb=None, time_domain=True):
    """Run every oracle comparison and return a list of :class:`Check`.

    ``perturb`` maps a preset name to component overrides applied to the
    closed-form side only; it exists to confirm that a planted mismatch is
    caught.
    """
    perturb = perturb or {}
    out = []
    for name, p, switch, net, grid in _circuit_cases():
        pa = p.replace(**perturb[name]) if name in perturb else p
        P_R, P_X, I1 = power_spectrum(pa, grid, switch=switch)
        spec = ac_sweep(net, grid, check=True)
        err = _power_error(P_R, P_X, spec)
        tol = TOLERANCES["rlc-netlist"]
        out.append(Check(name, "rlc-netlist", err, tol, _status(err, tol), f"{len(grid)} points"))
        if switch == math.inf:
            continue
        cp = circuit_modal(pa, exact_coupling=True)
        q_loop = I1 / (-1j * grid)
        q_osc = mech_response(cp, pa.Vs / pa.L1, grid)
        err = float(np.max(np.abs(q_osc - q_loop) / np.abs(q_loop)))
        tol = TOLERANCES["closed-form"]
        out.append(Check(name, "closed-form", err, tol, _status(err, tol), "q1 = I1/(-i w)"))
        if time_domain:
            w0 = resonance_frequency(pa, coupling_caps=1)
            ref = mech_response(cp, pa.Vs / pa.L1, w0)
            out.append(_td_check(name, cp, pa.Vs / pa.L1, w0, ref))
    if time_domain:
        lor = ModalParams(1.0, 1.0, 1.0, 0.0, 0.0, 0.1, 0.0, 0.0)
        out.append(_td_check("lorentz", lor, 1.0, 1.0, lorentz_response(1.0, 0.1, 1.0, 1.0)))
        for name in _MECH:
            mp = _modal(get_preset(name).parameters)
            drive = unit_peak_drive(mp)
            out.append(_td_check(name, mp, drive, mp.omega1, mech_response(mp, drive, mp.omega1)))
    return out


def _td_check(name, p, drive, omega, ref):
    tol = TOLERANCES["time-domain"]
    try:
        est = steady_state_response(p, drive, omega, steps_per_period=STEPS_PER_PERIOD)
    except NotApplicable as exc:
        return Check(name, "time-domain", math.nan, tol, "n/a", str(exc))
    err = abs(est.amplitude - ref) / abs(ref)
    note = f"w={omega:.6g}, residual {est.residual:.1e}"
    return Check(name, "time-domain", float(err), tol, _status(err, tol), note)


def format_table(checks):
    lines = [f"{'subject':<12} {'check':<12} {'max rel err':>12} {'tol':>8}  status  note"]
    for c in checks:
        e = "-" if math.isnan(c.error) else f"{c.error:.3e}"
        lines.append(f"{c.subject:<12} {c.kind:<12} {e:>12} {c.tol:>8.0e}  {c.status:<6}  {c.note}")
    n_fail = sum(c.failed for c in checks)
    n_na = sum(c.status == "n/a" for c in checks)
    lines.append(f"{len(checks)} checks: {len(checks) - n_fail - n_na} pass, {n_fail} fail, "
                 f"{n_na} not applicable")
    return "\n".join(lines)
