"""Two-particle interference on lossy beamsplitters.

Submodules:

- ``bsmath``: closed-form outcome probabilities, validation, unitary dilation
- ``quantum_sim``: permanent-based Fock-state reference simulator
- ``wavepacket``: Gaussian wavepackets and the delay-dependent overlap
- ``interference``: HOM scans, classical fringes, contrast extraction
- ``counting``: Monte Carlo detection chain and coincidence counter
- ``streams``: click-stream data type and CSV/binary codecs
- ``presets``: the two fabricated samples
"""

__version__ = "0.1.0"

from .bsmath import (
    BeamsplitterSpec,
    OutcomeDistribution,
    classical_coincidence,
    coincidence_with_overlap,
    dilate,
    loss_fraction,
    quantum_coincidence,
    two_particle_distribution,
    validate,
)
from .counting import ExperimentConfig, count_coincidences, hom_scan_counts, simulate_run
from .interference import classical_field_hom, contrast, hom_scan, mz_fringes
from .presets import get_preset
from .streams import TimestampStream, parse_stream
from .wavepacket import WavepacketSpec, coherence_time, overlap

__all__ = [
    "BeamsplitterSpec",
    "ExperimentConfig",
    "OutcomeDistribution",
    "TimestampStream",
    "WavepacketSpec",
    "classical_coincidence",
    "classical_field_hom",
    "coherence_time",
    "coincidence_with_overlap",
    "contrast",
    "count_coincidences",
    "dilate",
    "get_preset",
    "hom_scan",
    "hom_scan_counts",
    "loss_fraction",
    "mz_fringes",
    "overlap",
    "parse_stream",
    "quantum_coincidence",
    "simulate_run",
    "two_particle_distribution",
    "validate",
]
