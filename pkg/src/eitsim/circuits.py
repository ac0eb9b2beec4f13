"""
Closed-form analysis of capacitively coupled RLC loops.

Loop 1 (R1, L1, C1) is driven by the source and shares a coupling capacitor C
with each control loop (R2, L2, C2) and, for the three-loop circuit,
(R3, L3, C3). In the three-loop circuit both coupling capacitors lie in the
mesh of loop 1; the two-loop circuit has only one. ``coupling_caps`` counts
those capacitors wherever the distinction matters.

``A`` and ``B`` are the resistive and reactive parts of the loop-1
driving-point impedance with B > 0 for net inductive reactance. With the
package's ``exp(-i w t)`` phasors the impedance reads ``A - iB`` (``A + jB`` in
engineering notation) and the source current is ``I1 = Vs / (A - iB)``.
"""

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from .errors import PoleError
from .oscillators import ModalParams

__all__ = [
    "CircuitParams",
    "EquivalentCaps",
    "Reactances",
    "ABCoefficients",
    "PowerSplit",
    "equivalent_caps",
    "circuit_modal",
    "reactances",
    "ab_coefficients",
    "single_eit_ab",
    "loop1_current",
    "power_split",
    "power_spectrum",
]

# reflected-term denominators below this (ohm^2) are treated as poles
POLE_FLOOR = 1e-30


@dataclass(frozen=True)
class CircuitParams:
    """Component values in SI units. Loop 3 is optional (two-loop circuit)."""

    R1: float
    L1: float
    C1: float
    C: float
    R2: float
    L2: float
    C2: float
    R3: Optional[float] = None
    L3: Optional[float] = None
    C3: Optional[float] = None
    Vs: float = 1.0

    def __post_init__(self):
        loop3 = (self.R3, self.L3, self.C3)
        if any(v is None for v in loop3) and not all(v is None for v in loop3):
            raise ValueError("loop 3 needs all of R3, L3, C3 or none of them")
        if not self.R1 > 0:
            raise ValueError("R1 must be positive")
        for name in ("R2", "R3"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("L1", "L2", "L3", "C1", "C2", "C3", "C", "Vs"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def has_loop3(self):
        return self.R3 is not None

    @property
    def default_coupling_caps(self):
        return 2 if self.has_loop3 else 1

    def replace(self, **changes):
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return CircuitParams(**fields)

    def without_loop3(self):
        return self.replace(R3=None, L3=None, C3=None)


@dataclass(frozen=True)
class EquivalentCaps:
    Ce1: float
    Ce2: float
    Ce3: Optional[float] = None


@dataclass(frozen=True)
class Reactances:
    """Capacitive and inductive reactance magnitudes (ohm) at ``omega``."""

    omega: object
    X_C: object
    X_C1: object
    X_C2: object
    X_L1: object
    X_L2: object
    X_C3: object = None
    X_L3: object = None


@dataclass(frozen=True)
class ABCoefficients:
    A: object
    B: object


@dataclass(frozen=True)
class PowerSplit:
    P_R: object
    P_X: object


def _series(a, b):
    return a * b / (a + b)


def equivalent_caps(p, coupling_caps=None):
    """Series-equivalent loop capacitances.

    Loop 1 sees C1 in series with ``coupling_caps`` copies of C; each control
    loop sees its own capacitor in series with one C.
    """
    n = p.default_coupling_caps if coupling_caps is None else coupling_caps
    Ce1 = _series(p.C / n, p.C1)
    Ce2 = _series(p.C, p.C2)
    Ce3 = _series(p.C, p.C3) if p.has_loop3 else None
    return EquivalentCaps(Ce1, Ce2, Ce3)


def circuit_modal(p, coupling_caps=None, exact_coupling=False):
    """Express the loop equations in oscillator form.

    By default both control couplings are ``1/(L1 C)``. The circuit itself
    couples loop k back to loop 1 with ``1/(Lk C)``, so that mapping is exact
    only when the control inductances equal L1. ``exact_coupling=True`` uses
    the geometric mean ``1/(C sqrt(L1 Lk))`` instead, which rescales the
    control charges and reproduces the loop-1 response exactly. In the
    two-loop circuit the pumping oscillator is absent (zero coupling,
    frequency set to omega1).
    """
    ce = equivalent_caps(p, coupling_caps)
    w1_sq = 1.0 / (p.L1 * ce.Ce1)

    def coupling(Lk):
        if exact_coupling:
            return 1.0 / (p.C * math.sqrt(p.L1 * Lk))
        return 1.0 / (p.L1 * p.C)

    if p.has_loop3:
        w3_sq, Or_sq, g3 = 1.0 / (p.L3 * ce.Ce3), coupling(p.L3), p.R3 / p.L3
    else:
        w3_sq, Or_sq, g3 = w1_sq, 0.0, 0.0
    return ModalParams(
        omega1_sq=w1_sq,
        omega2_sq=1.0 / (p.L2 * ce.Ce2),
        omega3_sq=w3_sq,
        Omega_c_sq=coupling(p.L2),
        Omega_r_sq=Or_sq,
        gamma1=p.R1 / p.L1,
        gamma2=p.R2 / p.L2,
        gamma3=g3,
    )


def reactances(p, omega):
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("reactances need omega > 0")
    if w.ndim == 0:
        w = float(w)
    x3c = 1.0 / (w * p.C3) if p.has_loop3 else None
    x3l = w * p.L3 if p.has_loop3 else None
    return Reactances(
        omega=w,
        X_C=1.0 / (w * p.C),
        X_C1=1.0 / (w * p.C1),
        X_C2=1.0 / (w * p.C2),
        X_L1=w * p.L1,
        X_L2=w * p.L2,
        X_C3=x3c,
        X_L3=x3l,
    )


def _reflected(R, XL, XCk, XC, loop):
    # loop k reflected into loop 1 through the shared capacitor
    D = XL - (XC + XCk)
    den = R ** 2 + D ** 2
    if np.any(den < POLE_FLOOR):
        raise PoleError(f"lossless {loop} is resonant: reflected impedance diverges",
                        where=loop)
    return R * XC ** 2 / den, XC ** 2 * D / den


def ab_coefficients(p, x):
    """A and B for the three-loop circuit (two coupling capacitors in loop 1)."""
    if not p.has_loop3:
        raise ValueError("ab_coefficients needs loop 3; use single_eit_ab")
    a2, b2 = _reflected(p.R2, x.X_L2, x.X_C2, x.X_C, "loop2")
    a3, b3 = _reflected(p.R3, x.X_L3, x.X_C3, x.X_C, "loop3")
    A = p.R1 + a2 + a3
    B = x.X_L1 - (2 * x.X_C + x.X_C1) - b2 - b3
    return ABCoefficients(A, B)


def single_eit_ab(p, x, coupling_caps=1, switch=0.0):
    """A and B for loop 1 coupled to loop 2 only.

    ``coupling_caps`` is the number of coupling capacitors in the loop-1 mesh
    (1 for the two-loop circuit, 2 when loop 3 has been opened out of the
    three-loop circuit). ``switch`` is a resistance in series with loop 2:
    0 is a closed switch, ``math.inf`` removes loop 2 exactly, finite values
    model a lossy contact.
    """
    A = p.R1 + 0.0 * x.X_C
    B = x.X_L1 - (coupling_caps * x.X_C + x.X_C1)
    if math.isinf(switch):
        return ABCoefficients(A, B)
    a2, b2 = _reflected(p.R2 + switch, x.X_L2, x.X_C2, x.X_C, "loop2")
    return ABCoefficients(A + a2, B - b2)


def _check_ab(ab):
    if np.any(np.asarray(ab.A) ** 2 + np.asarray(ab.B) ** 2 == 0):
        raise PoleError("driving-point impedance vanishes", where="loop1")


def loop1_current(ab, Vs):
    """Source (loop-1) current phasor ``(A + iB) Vs / (A^2 + B^2)``."""
    _check_ab(ab)
    A, B = np.asarray(ab.A), np.asarray(ab.B)
    I = (A + 1j * B) * Vs / (A ** 2 + B ** 2)
    return complex(I) if I.ndim == 0 else I


def power_split(ab, Vs):
    """In-phase and quadrature power delivered by the source (amplitude phasors)."""
    _check_ab(ab)
    A, B = np.asarray(ab.A), np.asarray(ab.B)
    mag = abs(Vs) ** 2 / (A ** 2 + B ** 2)
    P_R, P_X = A * mag, B * mag
    if P_R.ndim == 0:
        return PowerSplit(float(P_R), float(P_X))
    return PowerSplit(P_R, P_X)


def power_spectrum(p, omegas, switch=0.0, coupling_caps=None):
    """Evaluate P_R, P_X and I1 over a frequency grid.

    Chooses the three-loop or two-loop formulas from ``p``. ``switch`` applies
    to loop 2 of the two-loop circuit only.
    """
    x = reactances(p, np.asarray(omegas, dtype=float))
    if p.has_loop3:
        if switch != 0.0 or coupling_caps not in (None, 2):
            raise ValueError("switch/coupling_caps only apply to the two-loop circuit")
        ab = ab_coefficients(p, x)
    else:
        ab = single_eit_ab(p, x, coupling_caps=coupling_caps or 1, switch=switch)
    ps = power_split(ab, p.Vs)
    return ps.P_R, ps.P_X, loop1_current(ab, p.Vs)
