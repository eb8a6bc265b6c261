"""Monte Carlo detection chain and a clocked coincidence counter.

The simulated chain is: pair source -> per-photon launch and propagation
losses -> splitter -> outcoupling -> single-photon counters (efficiency,
dark counts, dead time) -> clock quantisation. Everything after the splitter
acts independently on each particle, so the splitter outcome can be drawn
from the exact two-particle distribution first and thinned afterwards.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import bsmath
from .bsmath import BeamsplitterSpec
from .errors import ConfigurationError, DomainError
from .interference import ScanResult, classify
from .streams import DEFAULT_CLOCK, TimestampStream
from .wavepacket import WavepacketSpec, overlap_values

MAX_EXPECTED_PAIRS = 5e7

_OUTCOMES = ((1, 1), (2, 0), (0, 2), (1, 0), (0, 1), (0, 0))


@dataclass(frozen=True)
class ExperimentConfig:
    """Loss budget and detector model.

    Only ``outcoupling_efficiency`` (about one half) and the 100 MHz clock
    come from the experiment; launch, propagation and detector efficiencies,
    the pair rate, dark-count rate and dead time are illustrative defaults
    picked to give desk-scale count rates.
    """

    pair_rate: float = 1e5
    launch_efficiency: float = 0.3
    propagation_transmission: float = 0.5
    outcoupling_efficiency: float = 0.5
    detector_efficiency: float = 0.5
    dark_count_rate: float = 100.0
    dead_time: float = 22e-9
    clock_frequency: float = DEFAULT_CLOCK
    coincidence_window: int = 1

    def __post_init__(self):
        for name in (
            "launch_efficiency",
            "propagation_transmission",
            "outcoupling_efficiency",
            "detector_efficiency",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
        for name in ("pair_rate", "dark_count_rate", "dead_time"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ConfigurationError(f"{name} must be finite and >= 0, got {value}")
        if not self.clock_frequency > 0:
            raise ConfigurationError("clock_frequency must be positive")
        if int(self.coincidence_window) != self.coincidence_window or self.coincidence_window < 0:
            raise ConfigurationError("coincidence_window must be a non-negative integer")

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self):
        return asdict(self)

    @property
    def dead_ticks(self):
        """Minimum tick separation between accepted clicks on one channel."""
        return max(1, math.ceil(self.dead_time * self.clock_frequency - 1e-9))

    @property
    def survival(self):
        return self.launch_efficiency * self.propagation_transmission

    @property
    def detection(self):
        return self.outcoupling_efficiency * self.detector_efficiency


@dataclass(frozen=True)
class CoincidenceReport:
    singles_a: int
    singles_b: int
    coincidences: int
    duration: float
    accidental_estimate: float
    window_ticks: int = 1
    clock_frequency: float = DEFAULT_CLOCK

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def apply_dead_time(ticks, dead_ticks):
    """Non-paralysable dead time: drop clicks closer than ``dead_ticks`` to the last kept one."""
    ticks = np.asarray(ticks, dtype=np.uint64)
    if ticks.size < 2:
        return ticks
    if dead_ticks <= 1 and np.all(ticks[1:] > ticks[:-1]):
        return ticks
    keep = np.zeros(ticks.size, dtype=bool)
    last = None
    for k, t in enumerate(ticks.tolist()):
        if last is None or t - last >= dead_ticks:
            keep[k] = True
            last = t
    return ticks[keep]


def _sample_outcomes(rng, probs, n):
    p = np.array(probs, dtype=float)
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    return rng.choice(len(p), size=n, p=p)


def simulate_run(
    config: ExperimentConfig,
    spec: BeamsplitterSpec,
    overlap_I: float,
    duration: float,
    seed=None,
) -> tuple[TimestampStream, TimestampStream]:
    """Simulate one acquisition and return the click streams of counters A and B."""
    bsmath.validate(spec).raise_if_invalid()
    if not 0.0 <= overlap_I <= 1.0:
        raise DomainError(f"overlap_I must lie in [0, 1], got {overlap_I}")
    if not duration >= 0:
        raise ConfigurationError("duration must be non-negative")
    expected = config.pair_rate * duration
    expected_dark = config.dark_count_rate * duration
    if expected > MAX_EXPECTED_PAIRS or expected_dark > MAX_EXPECTED_PAIRS:
        raise ConfigurationError(
            f"run too large: {expected:.3g} pairs expected (limit {MAX_EXPECTED_PAIRS:.0e}); "
            "split it into shorter runs"
        )
    rng = np.random.default_rng(seed)

    n_pairs = int(rng.poisson(expected))
    t_pair = np.sort(rng.uniform(0.0, duration, n_pairs))
    alive1 = rng.random(n_pairs) < config.survival
    alive2 = rng.random(n_pairs) < config.survival

    n_a = np.zeros(n_pairs, dtype=np.int64)
    n_b = np.zeros(n_pairs, dtype=np.int64)

    both = np.flatnonzero(alive1 & alive2)
    dist = bsmath.detection_distribution(spec, overlap_I)
    pick = _sample_outcomes(rng, [dist[o] for o in _OUTCOMES], both.size)
    table = np.array(_OUTCOMES)
    n_a[both] = table[pick, 0]
    n_b[both] = table[pick, 1]

    # lone survivors: input 1 reaches a with |t|^2, input 2 with |r|^2
    rr, tt = abs(spec.r) ** 2, abs(spec.t) ** 2
    lost = max(1.0 - rr - tt, 0.0)
    for mask, (pa, pb) in (
        (alive1 & ~alive2, (tt, rr)),
        (~alive1 & alive2, (rr, tt)),
    ):
        idx = np.flatnonzero(mask)
        k = _sample_outcomes(rng, [pa, pb, lost], idx.size)
        n_a[idx] += k == 0
        n_b[idx] += k == 1

    eta = config.detection
    click_a = rng.random(n_pairs) < 1.0 - (1.0 - eta) ** n_a
    click_b = rng.random(n_pairs) < 1.0 - (1.0 - eta) ** n_b

    streams = []
    for ch, clicks in (("A", click_a), ("B", click_b)):
        n_dark = int(rng.poisson(expected_dark))
        times = np.concatenate([t_pair[clicks], rng.uniform(0.0, duration, n_dark)])
        ticks = np.sort(np.floor(times * config.clock_frequency).astype(np.uint64))
        ticks = apply_dead_time(ticks, config.dead_ticks)
        streams.append(TimestampStream(ch, ticks, config.clock_frequency, duration))
    return streams[0], streams[1]


def _greedy_pairs(a, b, window):
    i = j = n = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ta, tb = a[i], b[j]
        if ta > tb + window:
            j += 1
        elif tb > ta + window:
            i += 1
        else:
            n += 1
            i += 1
            j += 1
    return n


def count_coincidences(
    a: TimestampStream,
    b: TimestampStream,
    window_ticks: int = 1,
    duration: float | None = None,
) -> CoincidenceReport:
    """Count click pairs with ``|t_A - t_B| <= window_ticks``.

    Pairs are formed greedily in time order and each click is used at most
    once. The accidental estimate is ``R_A R_B (2w + 1) / clock * T``: with
    clock quantisation a window of ``w`` ticks accepts ``2w + 1`` tick
    offsets.
    """
    if a.clock_frequency != b.clock_frequency:
        raise DomainError(
            f"clock mismatch: {a.clock_frequency} Hz vs {b.clock_frequency} Hz"
        )
    if window_ticks < 0 or int(window_ticks) != window_ticks:
        raise DomainError("window_ticks must be a non-negative integer")
    window_ticks = int(window_ticks)
    clock = a.clock_frequency
    if duration is None:
        duration = a.duration if a.duration is not None else b.duration
    if duration is None:
        both = np.concatenate([a.ticks, b.ticks])
        duration = float(both.max() - both.min() + 1) / clock if both.size else 0.0

    n = _greedy_pairs(a.ticks.tolist(), b.ticks.tolist(), window_ticks)
    if duration > 0:
        ra, rb = len(a) / duration, len(b) / duration
        accidental = ra * rb * (2 * window_ticks + 1) / clock * duration
    else:
        accidental = 0.0
    return CoincidenceReport(
        singles_a=len(a),
        singles_b=len(b),
        coincidences=n,
        duration=float(duration),
        accidental_estimate=float(accidental),
        window_ticks=window_ticks,
        clock_frequency=clock,
    )


def spawn_seeds(seed, n):
    """Independent child seeds: child ``k`` of ``SeedSequence(seed)`` drives run ``k``."""
    return np.random.SeedSequence(seed).spawn(n)


def hom_scan_counts(
    config: ExperimentConfig,
    spec: BeamsplitterSpec,
    template: WavepacketSpec,
    delays,
    duration_per_point: float,
    seed=None,
    max_overlap: float = 1.0,
) -> ScanResult:
    """Simulated coincidence counts versus delay, with sqrt(N) error bars.

    The scan is labelled a dip or peak only when the zero-delay and
    baseline counts differ by more than three standard deviations.

    Run ``k`` (``k < len(delays)``) uses child seed ``k``. Two extra runs of
    the same duration give the contrast: child ``len(delays)`` at zero
    overlap (far-delay baseline) and child ``len(delays) + 1`` at zero delay.
    """
    if not 0.0 <= max_overlap <= 1.0:
        raise DomainError(f"max_overlap must lie in [0, 1], got {max_overlap}")
    delays = np.asarray(delays, dtype=float)
    overlaps = list(max_overlap * overlap_values(template, delays))
    overlaps += [0.0, max_overlap]
    seeds = spawn_seeds(seed, len(overlaps))
    counts = []
    for ov, s in zip(overlaps, seeds):
        a, b = simulate_run(config, spec, float(ov), duration_per_point, s)
        counts.append(count_coincidences(a, b, config.coincidence_window).coincidences)
    counts = np.array(counts, dtype=float)
    base, extr = counts[-2], counts[-1]
    if base > 0:
        # a feature counts only if it stands 3 sigma clear of Poisson noise
        kind, c = classify(base, extr, tol=3.0 * math.sqrt(base + extr))
        c_err = math.sqrt(extr / base**2 + extr**2 / base**3)
    else:
        kind, c, c_err = "flat", 0.0, float("nan")
    return ScanResult(
        delays=delays,
        coincidence=counts[:-2],
        baseline=float(base),
        extremum=float(extr),
        kind=kind,
        contrast=c,
        errors=np.sqrt(counts[:-2]),
        contrast_error=c_err,
        max_overlap=max_overlap,
    )
