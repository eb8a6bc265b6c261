"""How deep can a dip get with classical light?

Run with ``python3 demos/04_classical_bound.py``.
"""

# %%
# With classical fields of random relative phase the intensity correlation
# at the outputs can drop by at most half. Sampling the phase confirms it for
# a lossless splitter.
import math

import numpy as np

from lossyhom.bsmath import BeamsplitterSpec
from lossyhom.interference import classical_field_hom, classical_visibility, hom_scan
from lossyhom.presets import get_preset
from lossyhom.wavepacket import WavepacketSpec, coherence_time

wp = WavepacketSpec()
delays = np.linspace(-3, 3, 7) * coherence_time(wp)
lossless = BeamsplitterSpec(1j / math.sqrt(2), 1 / math.sqrt(2))
classical = classical_field_hom(lossless, delays, wp, n_phase_samples=100_000, seed=4)
quantum = hom_scan(lossless, wp, delays)
print(f"classical fields: {classical.kind}, visibility {classical.contrast:.4f}")
print(f"single photons:   {quantum.kind}, visibility {quantum.contrast:.4f}")

# %%
# For the lossy samples the classical bound shrinks with |r| != |t| and with
# the phase, while photon pairs can still exceed it.
for name in ("sample-I", "sample-II"):
    spec = get_preset(name).spec
    print(f"{name}: classical bound {classical_visibility(spec):.3f}")
