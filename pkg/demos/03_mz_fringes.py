"""Classical fringes read out the phase between r and t.

Run with ``python3 demos/03_mz_fringes.py``.
"""

# %%
# Feeding equal coherent fields into both inputs and sweeping their relative
# phase gives a fringe at each output. The offset between the two fringes
# equals 2 phi_rt, which is what decides dip versus peak.
import math

import numpy as np

from lossyhom.interference import mz_fringes
from lossyhom.presets import preset_names, get_preset

phases = np.linspace(0, 2 * math.pi, 360, endpoint=False)
for name in preset_names():
    for variant in ("design", "measured"):
        tr = mz_fringes(get_preset(name, variant).spec, phases)
        print(f"{name:10s} {variant:9s} fringe offset {math.degrees(tr.phase_difference):7.2f} deg"
              f"  visibility a={tr.visibility_a:.3f} b={tr.visibility_b:.3f}")

# %%
# A coarse text rendering of the sample-II fringes: the two outputs move
# almost in step because 2 phi_rt is close to zero.
tr = mz_fringes(get_preset("sample-II").spec, phases)
peak = max(tr.intensity_a.max(), tr.intensity_b.max())
for k in range(0, 360, 30):
    a = int(tr.intensity_a[k] / peak * 25)
    b = int(tr.intensity_b[k] / peak * 25)
    print(f"{k:4d} deg  a {'*' * a:<25s}  b {'*' * b}")
