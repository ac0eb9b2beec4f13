"""
Integrating the equations of motion.

The closed-form response assumes steady state. Integrating the three coupled
oscillators with RK4 from rest, waiting for the transient to die and
demodulating the last few periods gives the same complex amplitude. The
step size is halved twice to show the fourth-order error decay.

Run:  python3 demos/04_time_domain.py
"""

import math

import numpy as np

from eitsim import ModalParams, mech_response
from eitsim.timedomain import integrate, periodic_state, steady_state_response

p = ModalParams(1.0, 1.05 ** 2, 0.95 ** 2, 0.2, 0.1, 0.3, 0.05, 0.08)

print(f"{'omega':>6} {'|x1| RK4':>10} {'|x1| exact':>10} {'rel err':>9}")
for w in (0.85, 0.95, 1.0, 1.05, 1.15):
    est = steady_state_response(p, 1.0, w)
    ref = mech_response(p, 1.0, w)
    print(f"{w:6.2f} {abs(est.amplitude):10.5f} {abs(ref):10.5f} "
          f"{abs(est.amplitude - ref) / abs(ref):9.1e}")

print("\nglobal error over two periods, started on the periodic orbit")
w = 1.0
y0 = periodic_state(p, 1.0, w)
T = 2 * 2 * math.pi / w
prev = None
for spp in (32, 64, 128, 256):
    tr = integrate(p, 1.0, w, T / 2 / spp, T, y0=y0)
    err = np.max(np.abs(np.concatenate([tr.q[-1], tr.dq[-1]]) - y0))
    ratio = f"{prev / err:6.1f}" if prev else ""
    print(f"  {spp:4d} steps/period  error {err:.2e}  {ratio}")
    prev = err
