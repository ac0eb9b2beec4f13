"""
Fixed-step RK4 integration of the coupled-oscillator equations.

The real equations ``q'' + G q' + K q = drive_accel * cos(w t) * e1`` are
integrated from a chosen initial state and the steady state is demodulated
into a phasor ``X`` with ``q1(t) = Re[X exp(-i w t)]``, the same convention as
:func:`eitsim.oscillators.mech_response`. The circuit loop equations have the
same form with charges in place of displacements and ``Vs/L1`` as the drive.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import IntegrationError, NotApplicable

__all__ = ["Trajectory", "PhasorEstimate", "integrate", "steady_phasor",
           "max_natural_frequency", "settle_time", "steady_state_response",
           "energy", "periodic_state"]

STEP_FRACTION = 0.05
RESIDUAL_LIMIT = 1e-2


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    q: np.ndarray
    dq: np.ndarray

    def to_csv(self, fh):
        fh.write("t,q1,q2,q3,dq1,dq2,dq3\n")
        for t, q, dq in zip(self.t, self.q, self.dq):
            fh.write(",".join(repr(float(v)) for v in (t, *q, *dq)) + "\n")


@dataclass(frozen=True)
class PhasorEstimate:
    amplitude: complex
    residual: float

    @property
    def settled(self):
        return self.residual <= RESIDUAL_LIMIT


def max_natural_frequency(p):
    """Largest normal-mode frequency of the undamped coupled system."""
    ev = np.linalg.eigvalsh(p.stiffness())
    return math.sqrt(max(ev.max(), 0.0))


def _system(p):
    K, G = p.stiffness(), p.damping()
    A = np.zeros((6, 6))
    A[:3, 3:] = np.eye(3)
    A[3:, :3] = -K
    A[3:, 3:] = -G
    return A


def integrate(p, drive_accel, omega, dt, t_end, y0=None, record_every=1):
    """Classical RK4 with fixed step ``dt`` from t=0 to ``t_end``.

    ``y0`` is ``(q1, q2, q3, dq1, dq2, dq3)`` and defaults to rest. Every
    ``record_every``-th step is stored, plus the initial state.
    """
    w_max = max(max_natural_frequency(p), omega)
    if not dt < STEP_FRACTION * 2 * math.pi / w_max:
        raise IntegrationError(
            f"dt={dt!r} too large; need dt < {STEP_FRACTION} * 2*pi/{w_max:.6g}")
    if not p.gamma1 > 0:
        raise IntegrationError("gamma1 must be positive")
    n = int(round(t_end / dt))
    A = _system(p)
    b = np.zeros(6)
    b[3] = drive_accel
    y = np.zeros(6) if y0 is None else np.array(y0, dtype=float)
    nrec = n // record_every + 1
    out = np.empty((nrec, 6))
    ts = np.empty(nrec)
    out[0], ts[0] = y, 0.0
    r = 1
    h = dt
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n):
            t = k * h
            f0 = math.cos(omega * t)
            fh = math.cos(omega * (t + 0.5 * h))
            f1 = math.cos(omega * (t + h))
            k1 = A @ y + b * f0
            k2 = A @ (y + 0.5 * h * k1) + b * fh
            k3 = A @ (y + 0.5 * h * k2) + b * fh
            k4 = A @ (y + h * k3) + b * f1
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if not math.isfinite(y.sum()):
                raise IntegrationError(f"state diverged at t={(k + 1) * h!r}")
            if (k + 1) % record_every == 0:
                out[r], ts[r] = y, (k + 1) * h
                r += 1
    return Trajectory(ts[:r], out[:r, :3], out[:r, 3:])


def steady_phasor(traj, omega, n_periods, coord=0):
    """Demodulate the last ``n_periods`` drive periods of one coordinate.

    The window must hold an integer number of uniformly spaced samples per
    period so that cos and sin stay orthogonal on the sample set.
    """
    if n_periods < 4:
        raise ValueError("need at least 4 periods")
    t = traj.t
    dt = t[1] - t[0]
    period = 2 * math.pi / omega
    per = period / dt
    spp = int(round(per))
    if abs(per - spp) > 1e-6 * per:
        raise ValueError("samples per period must be an integer")
    N = spp * n_periods
    if N + 1 > len(t):
        raise ValueError("trajectory shorter than the demodulation window")
    x = traj.q[-N - 1:-1, coord]
    tt = t[-N - 1:-1]
    c, s = np.cos(omega * tt), np.sin(omega * tt)
    re = 2.0 * np.dot(x, c) / N
    im = 2.0 * np.dot(x, s) / N
    fit = re * c + im * s
    rms = math.sqrt(np.mean(x ** 2))
    resid = math.sqrt(np.mean((x - fit) ** 2)) / rms if rms > 0 else 0.0
    return PhasorEstimate(complex(re, im), resid)


def settle_time(p, factor=20.0):
    """``factor / gamma_min`` over the damped, participating coordinates.

    Raises :class:`NotApplicable` when a coupled coordinate is undamped, since
    its transient never decays.
    """
    rates = [p.gamma1]
    for g, coupling in ((p.gamma2, p.Omega_c_sq), (p.gamma3, p.Omega_r_sq)):
        if coupling == 0:
            continue
        if g == 0:
            raise NotApplicable("undamped coupled oscillator: no steady state to compare")
        rates.append(g)
    return factor / min(rates)


def periodic_state(p, drive_accel, omega):
    """State at t=0 on the closed-form periodic orbit, from the 3x3 phasor solve.

    Starting here removes the transient, which makes the integrator usable
    where ``settle_time`` is prohibitive; the orbit is the only periodic
    solution when every coordinate is damped.
    """
    M = p.stiffness() - omega ** 2 * np.eye(3) - 1j * omega * p.damping()
    X = np.linalg.solve(M, np.array([drive_accel, 0.0, 0.0], dtype=complex))
    # q = Re[X exp(-i w t)] -> q(0) = Re X, dq(0) = w Im X
    return np.concatenate([X.real, omega * X.imag])


def energy(p, q, dq):
    """Kinetic plus potential energy per unit mass along a trajectory."""
    K = p.stiffness()
    return 0.5 * np.sum(dq ** 2, axis=-1) + 0.5 * np.einsum("...i,ij,...j->...", q, K, q)


def steady_state_response(p, drive_accel, omega, steps_per_period=64, n_periods=8,
                          settle_factor=20.0, max_steps=5_000_000):
    """Integrate to steady state and return the demodulated x1 phasor."""
    period = 2 * math.pi / omega
    w_max = max(max_natural_frequency(p), omega)
    need = math.ceil(period * w_max / (2 * math.pi * STEP_FRACTION)) + 1
    spp = max(steps_per_period, need)
    dt = period / spp
    t_settle = settle_time(p, settle_factor)
    periods = math.ceil(t_settle / period) + n_periods
    if periods * spp > max_steps:
        raise NotApplicable(f"transient needs {periods * spp} steps (> {max_steps})")
    traj = integrate(p, drive_accel, omega, dt, periods * period)
    return steady_phasor(traj, omega, n_periods)
