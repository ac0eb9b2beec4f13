"""
Driven coupled-oscillator model of single and double EIT.

Three equal masses: the driven "atom" oscillator x1 is tied by springs to two
auxiliary oscillators x2 (coupling) and x3 (pumping). All responses use the
phasor convention ``x(t) = Re[X exp(-i w t)]``, under which a passive response
has ``Im X >= 0`` and ``Im X`` is the absorption channel.

Functions accept scalar or array frequencies and return complex values of the
same shape.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import PoleError

__all__ = [
    "MechanicalSystem",
    "ModalParams",
    "derive_modal",
    "lorentz_response",
    "mech_denominator",
    "mech_response",
    "susceptibility_from_response",
    "detuning_convert",
    "unit_peak_drive",
]


@dataclass(frozen=True)
class MechanicalSystem:
    """Spring-mass parameters in SI units.

    All three masses share the value ``m``. ``phi`` is the drive phase and is
    kept at zero by the model; it is stored for completeness only.
    """

    m: float
    kappa1: float
    kappa2: float
    kappa3: float
    kappa12: float
    kappa13: float
    gamma1: float
    gamma2: float
    gamma3: float
    F0: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m}")
        for name in ("kappa1", "kappa2", "kappa3", "kappa12", "kappa13"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not self.kappa1 > 0:
            raise ValueError("kappa1 must be positive")
        for name in ("gamma2", "gamma3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not self.gamma1 > 0:
            raise ValueError("gamma1 must be positive: the driven oscillator has to dissipate")

    @property
    def drive_accel(self):
        return self.F0 / self.m


@dataclass(frozen=True)
class ModalParams:
    """Squared natural frequencies, squared couplings and damping rates.

    Shared by the mechanical model and the circuit model (via
    :func:`eitsim.circuits.circuit_modal`).
    """

    omega1_sq: float
    omega2_sq: float
    omega3_sq: float
    Omega_c_sq: float
    Omega_r_sq: float
    gamma1: float
    gamma2: float
    gamma3: float

    def __post_init__(self):
        for name in ("omega1_sq", "omega2_sq", "omega3_sq"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("Omega_c_sq", "Omega_r_sq", "gamma2", "gamma3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not self.gamma1 > 0:
            raise ValueError("gamma1 must be positive")

    @classmethod
    def from_detunings(cls, omega1, Omega_c, Omega_r, gamma1, gamma2, gamma3,
                       delta_c=0.0, delta_r=0.0):
        """Build parameters from line-centre offsets of the control oscillators.

        ``delta_c`` and ``delta_r`` are the control detunings evaluated at the
        probe line centre (w = omega1), so ``omega2 = omega1 + delta_c`` and
        ``omega3 = omega1 + delta_r``.
        """
        return cls(
            omega1_sq=omega1 ** 2,
            omega2_sq=(omega1 + delta_c) ** 2,
            omega3_sq=(omega1 + delta_r) ** 2,
            Omega_c_sq=Omega_c ** 2,
            Omega_r_sq=Omega_r ** 2,
            gamma1=gamma1,
            gamma2=gamma2,
            gamma3=gamma3,
        )

    @property
    def omega1(self):
        return math.sqrt(self.omega1_sq)

    @property
    def omega2(self):
        return math.sqrt(self.omega2_sq)

    @property
    def omega3(self):
        return math.sqrt(self.omega3_sq)

    def stiffness(self):
        """Symmetric stiffness matrix of the undriven equations of motion."""
        return np.array([
            [self.omega1_sq, -self.Omega_c_sq, -self.Omega_r_sq],
            [-self.Omega_c_sq, self.omega2_sq, 0.0],
            [-self.Omega_r_sq, 0.0, self.omega3_sq],
        ])

    def damping(self):
        return np.diag([self.gamma1, self.gamma2, self.gamma3])


def derive_modal(sys):
    """Map spring constants and masses onto :class:`ModalParams`."""
    m = sys.m
    if not m > 0:
        raise ValueError("mass must be positive")
    return ModalParams(
        omega1_sq=(sys.kappa1 + sys.kappa12 + sys.kappa13) / m,
        omega2_sq=(sys.kappa2 + sys.kappa12) / m,
        omega3_sq=(sys.kappa3 + sys.kappa13) / m,
        Omega_c_sq=sys.kappa12 / m,
        Omega_r_sq=sys.kappa13 / m,
        gamma1=sys.gamma1,
        gamma2=sys.gamma2,
        gamma3=sys.gamma3,
    )


def _as_omega(omega):
    w = np.asarray(omega, dtype=float)
    return w, w.ndim == 0


def _ret(z, scalar):
    return complex(z) if scalar else z


def lorentz_response(omega0, gamma, drive_accel, omega, sign=-1):
    """Single damped driven oscillator, ``(F0/m) / (w0^2 - w^2 - i*gamma*w)``.

    ``sign`` is the exponent sign of the assumed time dependence
    ``exp(sign * i * w * t)``; the default -1 is the package convention.
    """
    if not omega0 > 0:
        raise ValueError("omega0 must be positive")
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    w, scalar = _as_omega(omega)
    den = (omega0 ** 2 - w ** 2) + sign * 1j * gamma * w
    if np.any(den == 0):
        raise PoleError("undamped oscillator driven on resonance", where="total",
                        omega=float(omega0))
    return _ret(drive_accel / den, scalar)


def _coupling_terms(p, w, sign):
    d2 = (p.omega2_sq - w ** 2) + sign * 1j * p.gamma2 * w
    d3 = (p.omega3_sq - w ** 2) + sign * 1j * p.gamma3 * w
    num2 = p.Omega_c_sq ** 2
    num3 = p.Omega_r_sq ** 2
    # a vanishing sub-denominator with a live coupling sends the response to 0
    blocked = np.zeros(w.shape, dtype=bool)
    t2 = np.zeros(w.shape, dtype=complex)
    t3 = np.zeros(w.shape, dtype=complex)
    if num2 != 0:
        z2 = d2 == 0
        blocked |= z2
        t2 = num2 / np.where(z2, 1.0, d2)
    if num3 != 0:
        z3 = d3 == 0
        blocked |= z3
        t3 = num3 / np.where(z3, 1.0, d3)
    return t2, t3, blocked


def mech_denominator(p, omega, sign=-1):
    """Total denominator ``d1 - Oc^4/d2 - Or^4/d3`` of the x1 response.

    Entries where a coupling fraction is singular are returned as ``inf``.
    """
    w, scalar = _as_omega(omega)
    d1 = (p.omega1_sq - w ** 2) + sign * 1j * p.gamma1 * w
    t2, t3, blocked = _coupling_terms(p, w, sign)
    den = np.where(blocked, np.inf + 0j, d1 - t2 - t3)
    return _ret(den, scalar)


def mech_response(p, drive_accel, omega, sign=-1):
    """Displacement amplitude of the driven oscillator x1.

    Exact zeros of a coupling sub-denominator (an undamped control oscillator
    driven at its own frequency) give exactly zero response. An exactly
    vanishing total denominator raises :class:`PoleError`.
    """
    w, scalar = _as_omega(omega)
    if np.any(w <= 0):
        raise ValueError("drive frequency must be positive")
    d1 = (p.omega1_sq - w ** 2) + sign * 1j * p.gamma1 * w
    t2, t3, blocked = _coupling_terms(p, w, sign)
    den = d1 - t2 - t3
    bad = (den == 0) & ~blocked
    if np.any(bad):
        at = float(np.atleast_1d(w)[np.atleast_1d(bad)][0])
        raise PoleError("total denominator vanishes", where="total", omega=at)
    x = np.where(blocked, 0j, drive_accel / np.where(blocked, 1.0, den))
    return _ret(x, scalar)


def susceptibility_from_response(x1, N_density=1.0, e_charge=1.0, F0=1.0):
    """Linear susceptibility ``N e x1 / F0``.

    ``Im`` of the result is the absorptive part, ``Re`` the dispersive part.
    """
    if not F0 > 0:
        raise ValueError("F0 must be positive")
    return N_density * e_charge * np.asarray(x1) / F0 if np.ndim(x1) else \
        complex(N_density * e_charge * x1 / F0)


def detuning_convert(omega, reference, mode):
    """Frequency offset in the mechanical or circuit sign convention.

    ``mode="mech"`` returns ``reference - omega``; ``mode="circuit"`` returns
    ``omega - reference``.
    """
    if mode == "mech":
        return reference - np.asarray(omega) if np.ndim(omega) else reference - omega
    if mode == "circuit":
        return np.asarray(omega) - reference if np.ndim(omega) else omega - reference
    raise ValueError(f"unknown detuning mode {mode!r}")


def unit_peak_drive(p):
    """Drive acceleration giving unit uncoupled absorption at w = omega1."""
    return p.gamma1 * p.omega1
