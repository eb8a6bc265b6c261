"""Two photons on a lossy beamsplitter: closed forms against brute force.

Run with ``python3 demos/01_two_photon_formulas.py``.
"""

# %%
# A splitter is fixed by its reflection and transmission amplitudes. For a
# lossless 50:50 device with a quarter-wave phase between them the
# coincidence probability for identical photons vanishes.
import math

import numpy as np

from lossyhom import bsmath
from lossyhom.bsmath import BeamsplitterSpec
from lossyhom.quantum_sim import FockState, marginalize_loss, output_distribution_indistinguishable

lossless = BeamsplitterSpec(1j / math.sqrt(2), 1 / math.sqrt(2))
print("lossless, identical photons   P_c =", bsmath.quantum_coincidence(lossless))
print("lossless, distinguishable     P_c =", bsmath.classical_coincidence(lossless))

# %%
# Loss opens up the phase between r and t. With r = t = 1/2 half of every
# photon's probability leaves the detected modes, and the two-photon term
# flips sign: identical photons now coincide twice as often.
lossy = BeamsplitterSpec(0.5, 0.5)
report = bsmath.validate(lossy)
print(f"\nr = t = 1/2: physical={report.ok}, loss per photon={report.loss_fraction:.2f}")
print("2 phi_rt =", math.degrees(bsmath.phase_info(lossy).two_phi_rt), "deg")
for overlap in (0.0, 1.0):
    d = bsmath.two_particle_distribution(lossy, overlap)
    print(f"  I={overlap:.0f}: coincidence={d.p_coincidence:.4f} "
          f"both-a={d.p_both_a:.4f} both-b={d.p_both_b:.4f} lost={d.p_at_least_one_lost:.4f}")

# %%
# The same numbers follow from a completely different route: embed the 2x2
# matrix in a 4x4 unitary, propagate the Fock state by permanents, and trace
# out the two environment modes.
u = bsmath.dilate(lossy)
print("\nunitarity error of the dilation:", u.unitarity_error())
oracle = marginalize_loss(output_distribution_indistinguishable(FockState((1, 1, 0, 0)), u))
print("oracle distribution:  ", np.round(oracle.as_array(), 12))
print("closed-form (I = 1):  ", bsmath.two_particle_distribution(lossy, 1.0).as_array())

# %%
# Not every pair of amplitudes is allowed. Both |r + t| and |r - t| must stay
# at or below one.
bad = BeamsplitterSpec(0.8, 0.6)
print("\nr=0.8, t=0.6 ->", bsmath.validate(bad).violations)
