"""Sampled frequency responses and their CSV/JSON serialization."""

from dataclasses import dataclass, field
import io
import json

import numpy as np

from .oscillators import detuning_convert

__all__ = ["Spectrum", "format_float", "CIRCUIT_COLUMNS", "MECH_COLUMNS"]

CIRCUIT_COLUMNS = ("P_R", "P_X", "re_I", "im_I")
MECH_COLUMNS = ("im_chi", "re_chi", "re_x1", "im_x1")


def format_float(v):
    """Shortest round-trip text for a double."""
    return repr(float(v))


@dataclass(frozen=True)
class Spectrum:
    """Response sampled on a strictly increasing angular-frequency grid.

    ``absorption`` is the non-negative loss channel (Im chi or P_R),
    ``dispersion`` the quadrature channel (Re chi or P_X) and ``response``
    the underlying complex phasor (x1 or the source current). ``reference``
    and ``convention`` define the detuning axis.
    """

    omegas: np.ndarray
    absorption: np.ndarray
    dispersion: np.ndarray
    response: np.ndarray
    reference: float = 0.0
    convention: str = "circuit"
    columns: tuple = CIRCUIT_COLUMNS
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        n = w.shape[0]
        for name in ("absorption", "dispersion", "response"):
            if np.shape(getattr(self, name)) != (n,):
                raise ValueError(f"{name} length does not match the grid")
        if n > 1 and not np.all(np.diff(w) > 0):
            raise ValueError("frequency grid must be strictly increasing")
        if self.convention not in ("mech", "circuit"):
            raise ValueError(f"unknown convention {self.convention!r}")

    def __len__(self):
        return len(self.omegas)

    @property
    def delta(self):
        return detuning_convert(np.asarray(self.omegas), self.reference, self.convention)

    def rows(self):
        resp = np.asarray(self.response, dtype=complex)
        for w, d, a, b, z in zip(self.omegas, self.delta, self.absorption,
                                 self.dispersion, resp):
            yield (w, d, a, b, z.real, z.imag)

    def to_csv(self, fh=None):
        """Write ``omega,delta,<channels>`` rows; returns the text if no file is given."""
        out = io.StringIO() if fh is None else fh
        out.write(",".join(("omega", "delta") + tuple(self.columns)) + "\n")
        for row in self.rows():
            out.write(",".join(format_float(v) for v in row) + "\n")
        if fh is None:
            return out.getvalue()

    def to_dict(self):
        names = ("omega", "delta") + tuple(self.columns)
        cols = list(zip(*self.rows())) or [()] * len(names)
        return {
            "convention": self.convention,
            "reference": float(self.reference),
            "columns": {n: [float(v) for v in c] for n, c in zip(names, cols)},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_csv(cls, text, reference=0.0, convention="circuit"):
        lines = [ln for ln in text.strip().splitlines() if ln]
        header = tuple(lines[0].split(","))
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        return cls(
            omegas=data[:, 0],
            absorption=data[:, 2],
            dispersion=data[:, 3],
            response=data[:, 4] + 1j * data[:, 5],
            reference=reference,
            convention=convention,
            columns=header[2:],
        )
