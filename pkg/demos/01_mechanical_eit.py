"""
From one damped oscillator to double transparency.

A driven oscillator absorbs most strongly on resonance. Coupling it to a
second, lightly damped oscillator opens a narrow transparency window at the
line centre; a third, almost undamped one opens a second window inside the
first. This script evaluates the three cases on the same grid and prints the
absorption Im(x1) at a few detunings together with the detected dips.

Run:  python3 demos/01_mechanical_eit.py [OUTDIR]
"""

import sys
from pathlib import Path

import numpy as np

from eitsim import ModalParams, detect_dips, lorentz_response, make_grid, mech_response
from eitsim.spectrum import MECH_COLUMNS, Spectrum

OMEGA1 = 10.0
GAMMA1 = 1.0
DRIVE = GAMMA1 * OMEGA1          # unit peak Lorentz absorption

cases = {
    "lorentz": None,
    "single": ModalParams.from_detunings(OMEGA1, 2.3, 0.0, GAMMA1, 1e-4, 0.0),
    "double": ModalParams.from_detunings(OMEGA1, 3.0, 2.3, GAMMA1, 0.1, 1e-4),
}

w = make_grid(OMEGA1 - 3, OMEGA1 + 3, 2001)
spectra = {}
for name, p in cases.items():
    x1 = lorentz_response(OMEGA1, GAMMA1, DRIVE, w) if p is None else mech_response(p, DRIVE, w)
    spectra[name] = Spectrum(w, x1.imag, x1.real, x1, reference=OMEGA1, convention="mech",
                             columns=MECH_COLUMNS)

# absorption at a handful of detunings Delta = omega1 - omega
probe = [-1.5, -0.5, -0.05, 0.0, 0.05, 0.5, 1.5]
idx = [int(np.argmin(np.abs(spectra["lorentz"].delta - d))) for d in probe]
print("Delta    " + "".join(f"{n:>10}" for n in spectra))
for d, i in zip(probe, idx):
    print(f"{d:+6.2f}   " + "".join(f"{s.absorption[i]:10.4f}" for s in spectra.values()))

print()
for name, s in spectra.items():
    rep = detect_dips(s)
    dips = ", ".join(f"Delta={OMEGA1 - d.omega:+.3f} fwhm={d.fwhm:.3f}" for d in rep.dips)
    print(f"{name:8} {rep.classification:10} {dips}")

if len(sys.argv) > 1:
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    for name, s in spectra.items():
        (out / f"mech_{name}.csv").write_text(s.to_csv())
    print(f"\nwrote {len(spectra)} CSV files to {out}")
