"""
Named scenario presets (fig7a ... fig12d).

Mechanical presets are in units of the atomic damping (gamma1 = 1) with the
probe line centre at omega1 = 10 and a sweep of +-3 around it. Circuit presets
use SI component values; their detuning reference is the single-capacitor
resonance of the driven loop, ``1/sqrt(L1 * C*C1/(C+C1))``, which coincides
with the control-loop resonances when their components match loop 1.

The bench-circuit (fig12) presets are netlists shipped in ``eitsim/data``.
Node map of the generated netlists::

    three loops: V1 1-0, R1 1-2, L1 2-3, C1 3-4, CC2 4-5, CC3 5-0,
                 R2 4-6, L2 6-7, C2 7-5,  R3 5-8, L3 8-9, C3 9-0
    two loops:   V1 1-0, R1 1-2, L1 2-3, C1 3-4, CC 4-0,
                 R2 4-6, L2 6-7, C2 7-0   (loop 2 omitted when the switch is open)
"""

from importlib import resources

from .analysis import resonance_frequency
from .netlist import Element, Netlist, Sweep, serialize_netlist
from .scenario import Scenario

__all__ = ["PRESETS", "get_preset", "preset_names", "circuit_netlist",
           "MECH_OMEGA1", "CIRCUIT_SWEEP"]

MECH_OMEGA1 = 10.0
MECH_HALF_SPAN = 3.0
MECH_POINTS = 2001
CIRCUIT_SWEEP = {"start": 4.0e4, "stop": 3.0e5, "points": 1000, "scale": "lin"}

u = 1e-6

# (gamma1, gamma2, gamma3, Omega_c, Omega_r, delta_c, delta_r)
_MECH = {
    "fig7a": (1.0, 0.1, 1e-4, 3.0, 2.3, 0.0, 0.0),
    "fig7c": (1.0, 0.1, 1e-4, 2.7, 3.0, 0.0, 0.0),
    "fig7e": (1.0, 0.1, 1e-4, 3.0, 2.3, 0.1, 0.1),
    "fig8a": (1.0, 1e-4, 0.0, 2.3, 0.0, 0.0, 0.0),
    "fig8c": (1.0, 1e-4, 0.0, 3.0, 0.0, 0.0, 0.0),
    "fig8e": (1.0, 1e-4, 0.0, 2.3, 0.0, 0.1, 0.0),
}

_FIG9 = dict(R1=50.0, R2=5.0, R3=5.0, C1=0.1 * u, C2=0.1 * u, C3=0.1 * u, C=0.2 * u, L1=0.0010)
_FIG10 = dict(R1=50.0, L2=0.0020, L1=0.0010, L3=0.0003, C1=0.1 * u, C2=0.1 * u, C3=0.1 * u,
              C=0.2 * u)
_FIG11 = dict(R2=5.0, R1=50.0, C1=0.1 * u, C2=0.1 * u, C=0.2 * u, L1=0.0010)

_CIRCUIT = {
    "fig9a": dict(_FIG9, L2=0.0010, L3=0.0010),
    "fig9b": dict(_FIG9, L2=0.0010, L3=0.0015),
    "fig9c": dict(_FIG9, L2=0.0020, L3=0.0003),
    "fig9d": dict(_FIG9, L2=0.0005, L3=0.0003),
    "fig10a": dict(_FIG10, R2=5.0, R3=2.0),
    "fig10b": dict(_FIG10, R2=15.0, R3=2.0),
    "fig10c": dict(_FIG10, R2=30.0, R3=5.0),
    "fig10d": dict(_FIG10, R2=50.0, R3=5.0),
    "fig11a": dict(_FIG11, L2=0.0010),
    "fig11b": dict(_FIG11, L2=0.0015),
    "fig11c": dict(_FIG11, L2=0.0020),
    "fig11d": dict(_FIG11, L2=0.0005),
}

_FIG12AB = dict(R1=50.0, R2=5.0, C1=0.10 * u, C2=0.10 * u, L1=0.27, L2=0.27)
_FIG12CD = dict(R1=87.0, R2=16.0, R3=25.0, C1=0.047 * u, C2=0.047 * u, C3=0.047 * u,
                C=0.1 * u, L1=0.27, L3=0.27)

# name -> (parameters, switch, (start, stop, points))
_EXPERIMENT = {
    "fig12a": (dict(_FIG12AB, C=0.047 * u), "closed", (2.0e3, 3.0e4, 2000)),
    "fig12a-open": (dict(_FIG12AB, C=0.047 * u), "open", (2.0e3, 3.0e4, 2000)),
    "fig12b": (dict(_FIG12AB, C=0.2 * u), "closed", (2.0e3, 2.0e4, 2000)),
    "fig12b-open": (dict(_FIG12AB, C=0.2 * u), "open", (2.0e3, 2.0e4, 2000)),
    "fig12c": (dict(_FIG12CD, L2=0.065), "closed", (3.0e3, 3.5e4, 2000)),
    "fig12d": (dict(_FIG12CD, L2=0.185), "closed", (3.0e3, 3.5e4, 2000)),
}


def circuit_netlist(p, sweep, switch_open=False, title=None):
    """Netlist realizing the coupled-loop schematic for ``p``.

    ``sweep`` is ``(start, stop, points)`` or a :class:`Sweep`. A zero
    control-loop resistance is realized by omitting that resistor.
    """
    if not isinstance(sweep, Sweep):
        start, stop, points = sweep
        sweep = Sweep("lin", points, start, stop)
    els = [Element("V", "V1", 1, 0, p.Vs), Element("R", "R1", 1, 2, p.R1),
           Element("L", "L1", 2, 3, p.L1), Element("C", "C1", 3, 4, p.C1)]

    def loop(k, R, L, Cl, top, bottom, first):
        n1, n2 = first, first + 1
        out = []
        if R > 0:
            out.append(Element("R", f"R{k}", top, n1, R))
        else:
            n1 = top
        out.append(Element("L", f"L{k}", n1, n2, L))
        out.append(Element("C", f"C{k}", n2, bottom, Cl))
        return out

    if p.has_loop3:
        els += [Element("C", "CC2", 4, 5, p.C), Element("C", "CC3", 5, 0, p.C)]
        els += loop(2, p.R2, p.L2, p.C2, 4, 5, 6)
        els += loop(3, p.R3, p.L3, p.C3, 5, 0, 8)
    else:
        els.append(Element("C", "CC", 4, 0, p.C))
        if not switch_open:
            els += loop(2, p.R2, p.L2, p.C2, 4, 0, 6)
    return Netlist(tuple(els), sweep)


def _mech_scenario(name):
    g1, g2, g3, Oc, Or, dc, dr = _MECH[name]
    params = dict(omega1=MECH_OMEGA1, Omega_c=Oc, Omega_r=Or, gamma1=g1, gamma2=g2,
                  gamma3=g3, delta_c=dc, delta_r=dr)
    sweep = {"start": MECH_OMEGA1 - MECH_HALF_SPAN, "stop": MECH_OMEGA1 + MECH_HALF_SPAN,
             "points": MECH_POINTS, "scale": "lin"}
    return Scenario(model="mech", parameters=params, sweep=sweep, name=name)


def _circuit_scenario(name):
    return Scenario(model="rlc-analytic", parameters=dict(_CIRCUIT[name]),
                    sweep=dict(CIRCUIT_SWEEP), name=name)


def _experiment_scenario(name):
    from .circuits import CircuitParams
    params, _, _ = _EXPERIMENT[name]
    text = resources.files("eitsim").joinpath("data", f"{name}.cir").read_text(encoding="utf-8")
    ref = resonance_frequency(CircuitParams(**params), coupling_caps=1)
    return Scenario(model="netlist", netlist=text, reference=ref, name=name)


def preset_names():
    return tuple(_MECH) + tuple(_CIRCUIT) + tuple(_EXPERIMENT)


def get_preset(name):
    if name in _MECH:
        return _mech_scenario(name)
    if name in _CIRCUIT:
        return _circuit_scenario(name)
    if name in _EXPERIMENT:
        return _experiment_scenario(name)
    raise KeyError(f"unknown preset {name!r}; choose from {', '.join(preset_names())}")


def experiment_netlist_text(name):
    """Regenerate a shipped experimental netlist from its component values."""
    from .circuits import CircuitParams
    params, switch, sweep = _EXPERIMENT[name]
    p = CircuitParams(**params)
    net = circuit_netlist(p, sweep, switch_open=(switch == "open"))
    header = (f"{name}: experimental circuit, switch {switch}\n"
              + ("three loops: V1 1-0, R1 1-2, L1 2-3, C1 3-4, CC2 4-5, CC3 5-0,\n"
                 "  R2 4-6, L2 6-7, C2 7-5, R3 5-8, L3 8-9, C3 9-0" if p.has_loop3 else
                 "two loops: V1 1-0, R1 1-2, L1 2-3, C1 3-4, CC 4-0,\n"
                 "  R2 4-6, L2 6-7, C2 7-0 (absent when the switch is open)")
              + "\nsweep in rad/s")
    return serialize_netlist(net, header=header)


PRESETS = preset_names()
