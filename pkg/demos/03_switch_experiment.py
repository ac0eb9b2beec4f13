"""
Opening the switch.

The bench circuits use a switch in series with the control loop. With the
switch open the driven loop is a plain series resonance and its power curve
has no dip; closing it couples the second loop and a transparency dip
appears. The double-loop bench circuits show two dips, and the second one
moves when the loop-2 inductor is swapped.

Run:  python3 demos/03_switch_experiment.py
"""

from eitsim.presets import get_preset
from eitsim.scenario import analyse

for name in ("fig12a-open", "fig12a", "fig12b-open", "fig12b", "fig12c", "fig12d"):
    spec, rep = analyse(get_preset(name))
    where = ", ".join(f"{d.omega:.0f} rad/s (depth {d.depth:.2f})" for d in rep.dips) or "-"
    print(f"{name:12} {rep.classification:10} {where}")
