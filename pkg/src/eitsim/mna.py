"""
AC steady-state modified nodal analysis.

Unknowns are the non-ground node voltages followed by the current through the
voltage source. Admittances follow the ``exp(-i w t)`` phasor convention:
``G = 1/R``, ``Y_C = -i w C``, ``Y_L = i / (w L)``; a source ``V AC a phi``
has phasor ``a * exp(-i phi)``.

Complex power uses amplitude phasors (no factor 1/2) and is reported in the
engineering sign convention, ``S = P + iQ`` with ``Q > 0`` for inductive
loads. With ``exp(-i w t)`` phasors this is ``S = conj(V) * I``, which equals
``V * conj(I)`` written in ``exp(+j w t)`` phasors.
"""

from dataclasses import dataclass
import os

import numpy as np

from .errors import SingularCircuitError, SolverCheckError
from .spectrum import Spectrum, CIRCUIT_COLUMNS

__all__ = ["MnaSystem", "AcSolution", "ElementPower", "stamp", "solve",
           "element_power", "kcl_residual", "tellegen_residual", "ac_sweep",
           "gauss_solve"]

PIVOT_RTOL = 1e-14
CHECK_RTOL = 1e-9
# force the post-solve checks even when a caller passes check=False
ALWAYS_CHECK = os.environ.get("EITSIM_ALWAYS_CHECK", "") not in ("", "0")


@dataclass(frozen=True)
class MnaSystem:
    """Assembled complex system ``matrix @ x = rhs``.

    ``matrix`` has shape (n, n) or (k, n, n) for a batch of k frequencies.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    nodes: tuple
    omega: object

    @property
    def dimension(self):
        return self.matrix.shape[-1]


@dataclass(frozen=True)
class AcSolution:
    """Node voltages (ordered as ``nodes``) and the delivered source current.

    ``source_current`` flows out of the source's + terminal into the circuit.
    """

    nodes: tuple
    node_voltages: np.ndarray
    source_current: object
    omega: object

    def voltage(self, node):
        if node == 0:
            return np.zeros_like(self.node_voltages[..., 0]) if self.node_voltages.ndim > 1 else 0j
        return self.node_voltages[..., self.nodes.index(node)]


@dataclass(frozen=True)
class ElementPower:
    name: str
    kind: str
    P: object
    Q: object


def _admittance(e, w):
    if e.kind == "R":
        return np.full(np.shape(w), 1.0 / e.value, dtype=complex)
    if e.kind == "C":
        return -1j * w * e.value
    if e.kind == "L":
        return 1j / (w * e.value)
    raise ValueError(e.kind)


def _source_phasor(src):
    return src.value * np.exp(-1j * src.phase)


def stamp(netlist, omega):
    """Assemble the MNA system at one frequency or a batch of frequencies."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("AC analysis needs omega > 0")
    batch = np.atleast_1d(w)
    nodes = netlist.nodes
    index = {n: i for i, n in enumerate(nodes)}
    nn = len(nodes)
    dim = nn + 1
    M = np.zeros((batch.size, dim, dim), dtype=complex)
    for e in netlist.passives:
        y = _admittance(e, batch)
        ia, ib = index.get(e.a), index.get(e.b)
        if ia is not None:
            M[:, ia, ia] += y
        if ib is not None:
            M[:, ib, ib] += y
        if ia is not None and ib is not None:
            M[:, ia, ib] -= y
            M[:, ib, ia] -= y
    src = netlist.source
    k = nn
    ia, ib = index.get(src.a), index.get(src.b)
    if ia is not None:
        M[:, ia, k] += 1
        M[:, k, ia] += 1
    if ib is not None:
        M[:, ib, k] -= 1
        M[:, k, ib] -= 1
    rhs = np.zeros((batch.size, dim), dtype=complex)
    rhs[:, k] = _source_phasor(src)
    if w.ndim == 0:
        return MnaSystem(M[0], rhs[0], nodes, float(w))
    return MnaSystem(M, rhs, nodes, w)


def gauss_solve(matrix, rhs, omega=None):
    """Gaussian elimination with partial pivoting, batched over leading axis.

    A pivot smaller than ``PIVOT_RTOL`` times the infinity norm of its
    original matrix row raises :class:`SingularCircuitError`.
    """
    A = np.array(matrix, dtype=complex)
    b = np.array(rhs, dtype=complex)
    single = A.ndim == 2
    if single:
        A, b = A[None], b[None]
    k, n, _ = A.shape
    rownorm = np.abs(A).max(axis=2)
    perm = np.tile(np.arange(n), (k, 1))
    rows = np.arange(k)
    for j in range(n):
        p = j + np.argmax(np.abs(A[:, j:, j]), axis=1)
        # swap rows j <-> p per batch member
        for arr in (A, b, perm, rownorm):
            tmp = arr[rows, j].copy()
            arr[rows, j] = arr[rows, p]
            arr[rows, p] = tmp
        piv = A[:, j, j]
        bad = np.abs(piv) < PIVOT_RTOL * rownorm[:, j]
        if np.any(bad):
            at = int(np.argmax(bad))
            w = None
            if omega is not None:
                w = float(np.atleast_1d(omega)[at])
            raise SingularCircuitError(
                f"singular circuit matrix: pivot {j} vanishes"
                + (f" at omega={w!r}" if w is not None else ""),
                pivot_index=j, omega=w)
        if j + 1 < n:
            f = A[:, j + 1:, j] / piv[:, None]
            A[:, j + 1:, j:] -= f[:, :, None] * A[:, j, None, j:]
            b[:, j + 1:] -= f * b[:, j, None]
    x = np.zeros_like(b)
    for j in range(n - 1, -1, -1):
        acc = b[:, j] - np.einsum("ki,ki->k", A[:, j, j + 1:], x[:, j + 1:])
        x[:, j] = acc / A[:, j, j]
    return x[0] if single else x


def solve(system, netlist=None, check=True):
    """Solve an assembled system.

    With ``netlist`` given and ``check`` true (or ``ALWAYS_CHECK`` set), the
    KCL residual and the Tellegen power balance are verified against
    ``CHECK_RTOL`` and :class:`SolverCheckError` raised on failure.
    """
    if system.dimension < 1:
        raise ValueError("empty system")
    x = gauss_solve(system.matrix, system.rhs, system.omega)
    nn = len(system.nodes)
    sol = AcSolution(system.nodes, x[..., :nn], -x[..., nn], system.omega)
    if (check or ALWAYS_CHECK) and netlist is not None:
        r = kcl_residual(sol, netlist)
        if np.any(r > CHECK_RTOL):
            raise SolverCheckError(f"KCL residual {float(np.max(r)):.3e} exceeds {CHECK_RTOL}")
        r = tellegen_residual(element_power(sol, netlist))
        if np.any(r > CHECK_RTOL):
            raise SolverCheckError(f"Tellegen residual {float(np.max(r)):.3e} exceeds {CHECK_RTOL}")
    return sol


def _branch(sol, e):
    return sol.voltage(e.a) - sol.voltage(e.b)


def kcl_residual(sol, netlist):
    """Largest node current imbalance relative to the largest branch current."""
    nodes = sol.nodes
    index = {n: i for i, n in enumerate(nodes)}
    shape = np.shape(sol.source_current)
    net = np.zeros(shape + (len(nodes),), dtype=complex)
    biggest = np.abs(np.asarray(sol.source_current, dtype=complex))
    w = np.asarray(sol.omega, dtype=float)
    for e in netlist.passives:
        i_ab = _admittance(e, w) * _branch(sol, e)
        biggest = np.maximum(biggest, np.abs(i_ab))
        if e.a in index:
            net[..., index[e.a]] += i_ab
        if e.b in index:
            net[..., index[e.b]] -= i_ab
    src = netlist.source
    # delivered current leaves the + node into the circuit
    if src.a in index:
        net[..., index[src.a]] -= sol.source_current
    if src.b in index:
        net[..., index[src.b]] += sol.source_current
    worst = np.abs(net).max(axis=-1) if len(nodes) else np.zeros(shape)
    return worst / np.where(biggest > 0, biggest, 1.0)


def element_power(sol, netlist):
    """Complex power for every element, source included (delivered power).

    Resistors report ``P = Re S`` with ``Q = 0``; inductors and capacitors
    report ``Q = Im S`` with ``P = 0``.
    """
    w = np.asarray(sol.omega, dtype=float)
    out = []
    for e in netlist.elements:
        if e.kind == "V":
            s = np.conj(_branch(sol, e)) * sol.source_current
            out.append(ElementPower(e.name, e.kind, s.real, s.imag))
            continue
        v = _branch(sol, e)
        s = np.conj(v) * (_admittance(e, w) * v)
        zero = np.zeros_like(s.real)
        if e.kind == "R":
            out.append(ElementPower(e.name, e.kind, s.real, zero))
        else:
            out.append(ElementPower(e.name, e.kind, zero, s.imag))
    return out


def tellegen_residual(powers):
    """Relative mismatch between source power and total element power."""
    src = next(p for p in powers if p.kind == "V")
    P = sum(p.P for p in powers if p.kind != "V")
    Q = sum(p.Q for p in powers if p.kind != "V")
    scale = np.maximum(np.hypot(src.P, src.Q), 1e-30)
    return np.hypot(P - src.P, Q - src.Q) / scale


def ac_sweep(netlist, omegas=None, reference=0.0, check=True):
    """Solve over the netlist's ``.ac`` grid (or ``omegas``).

    Absorption is the active power delivered by the source (equal to the total
    resistor dissipation), dispersion its reactive power, response the source
    current. ``check`` is passed on to :func:`solve`.
    """
    w = netlist.grid() if omegas is None else np.asarray(omegas, dtype=float)
    system = stamp(netlist, w)
    sol = solve(system, netlist, check=check)
    powers = element_power(sol, netlist)
    src = next(p for p in powers if p.kind == "V")
    return Spectrum(
        omegas=w,
        absorption=np.asarray(src.P, dtype=float),
        dispersion=np.asarray(src.Q, dtype=float),
        response=np.asarray(sol.source_current, dtype=complex),
        reference=reference,
        convention="circuit",
        columns=CIRCUIT_COLUMNS,
        metadata={"resistor_power": {p.name: np.asarray(p.P) for p in powers if p.kind == "R"}},
    )
