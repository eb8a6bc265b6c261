"""HOM delay scans and classical two-port fringes for a lossy splitter."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import bsmath
from .bsmath import BeamsplitterSpec, wrap_angle
from .errors import DomainError
from .wavepacket import WavepacketSpec, overlap_values

FLAT_TOL = 1e-12
CLASSICAL_DIP_BOUND = 0.5


@dataclass
class ScanResult:
    """Coincidence signal versus delay.

    ``coincidence`` holds probabilities per pair for analytic scans and raw
    counts for Monte Carlo scans; ``errors`` is only set for the latter.
    """

    delays: np.ndarray
    coincidence: np.ndarray
    baseline: float
    extremum: float
    kind: str
    contrast: float
    errors: np.ndarray | None = None
    contrast_error: float | None = None
    classical_bound: float | None = None
    max_overlap: float | None = None

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["delay_fs", "coincidence"]
        if self.errors is not None:
            header.append("error")
        writer.writerow(header)
        for k, tau in enumerate(self.delays):
            row = [repr(float(tau) * 1e15), repr(float(self.coincidence[k]))]
            if self.errors is not None:
                row.append(repr(float(self.errors[k])))
            writer.writerow(row)
        return buf.getvalue()

    def to_dict(self):
        out = {
            "delay_fs": [float(x) * 1e15 for x in self.delays],
            "coincidence": [float(x) for x in self.coincidence],
            "baseline": self.baseline,
            "extremum": self.extremum,
            "kind": self.kind,
            "contrast": self.contrast,
        }
        for key in ("contrast_error", "classical_bound", "max_overlap"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.errors is not None:
            out["error"] = [float(x) for x in self.errors]
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class ContrastReport:
    kind: str
    contrast: float
    quantum_flag: bool


@dataclass
class FringeTraces:
    phases: np.ndarray
    intensity_a: np.ndarray
    intensity_b: np.ndarray
    phase_difference: float
    visibility_a: float
    visibility_b: float

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["phase_rad", "intensity_a", "intensity_b"])
        for row in zip(self.phases, self.intensity_a, self.intensity_b):
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    def to_dict(self):
        return {
            "phase_rad": [float(x) for x in self.phases],
            "intensity_a": [float(x) for x in self.intensity_a],
            "intensity_b": [float(x) for x in self.intensity_b],
            "phase_difference_rad": self.phase_difference,
            "phase_difference_deg": math.degrees(self.phase_difference),
            "visibility_a": self.visibility_a,
            "visibility_b": self.visibility_b,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def classify(baseline, extremum, tol=FLAT_TOL):
    """Return ``(kind, contrast)`` for a feature relative to its baseline."""
    if baseline <= 0:
        raise DomainError("baseline coincidence rate is zero; contrast undefined")
    diff = extremum - baseline
    if abs(diff) <= tol:
        return "flat", 0.0
    return ("dip" if diff < 0 else "peak"), abs(diff) / baseline


def classical_visibility(spec: BeamsplitterSpec, coherence: float = 1.0) -> float:
    """Phase-averaged classical coincidence contrast.

    For unit-intensity fields with random relative phase and mutual
    coherence ``coherence`` (modulus of the field overlap squared),
    ``<I_a I_b> = (|r|^2+|t|^2)^2 + 2|rt|^2 cos(2 phi_rt) * coherence``.
    """
    norm = (abs(spec.r) ** 2 + abs(spec.t) ** 2) ** 2
    if norm == 0:
        return 0.0
    return abs(bsmath.interference_term(spec)) * coherence / norm


def hom_scan(
    spec: BeamsplitterSpec,
    template: WavepacketSpec,
    delays,
    max_overlap: float = 1.0,
) -> ScanResult:
    """Coincidence probability per pair versus relative delay.

    Residual distinguishability is folded into ``max_overlap``; the effective
    overlap at delay ``tau`` is ``max_overlap * I(tau)``.
    """
    if not 0.0 <= max_overlap <= 1.0:
        raise DomainError(f"max_overlap must lie in [0, 1], got {max_overlap}")
    delays = np.asarray(delays, dtype=float)
    eff = max_overlap * overlap_values(template, delays)
    probs = np.array([bsmath.coincidence_with_overlap(spec, float(i)) for i in eff])
    baseline = bsmath.classical_coincidence(spec)
    extremum = bsmath.coincidence_with_overlap(spec, max_overlap)
    kind, c = classify(baseline, extremum)
    return ScanResult(
        delays=delays,
        coincidence=probs,
        baseline=baseline,
        extremum=extremum,
        kind=kind,
        contrast=c,
        classical_bound=classical_visibility(spec),
        max_overlap=max_overlap,
    )


def contrast(scan: ScanResult) -> ContrastReport:
    if scan.kind == "flat":
        return ContrastReport("flat", 0.0, False)
    if scan.kind == "dip":
        flag = scan.contrast > CLASSICAL_DIP_BOUND
    else:
        flag = scan.classical_bound is not None and scan.contrast > scan.classical_bound
    return ContrastReport(scan.kind, scan.contrast, bool(flag))


def full_overlap_contrast(spec: BeamsplitterSpec) -> float:
    """Contrast reached with perfectly indistinguishable particles."""
    return abs(bsmath.interference_term(spec)) / bsmath.classical_coincidence(spec)


def fit_max_overlap(spec: BeamsplitterSpec, target_contrast: float) -> float:
    """Scalar overlap that makes ``hom_scan`` reproduce ``target_contrast``.

    The contrast is linear in the overlap, so the fit is exact.
    """
    full = full_overlap_contrast(spec)
    if full == 0:
        raise DomainError("splitter shows no two-particle interference; nothing to fit")
    value = target_contrast / full
    if not 0.0 <= value <= 1.0:
        raise DomainError(
            f"contrast {target_contrast} unreachable: maximum for this splitter is {full:.4f}"
        )
    return value


def fit_fringe_phase(phases, values):
    """Least-squares fit of ``c0 + A cos(theta + psi)``; returns ``(psi, A, c0)``."""
    phases = np.asarray(phases, dtype=float)
    design = np.column_stack([np.ones_like(phases), np.cos(phases), np.sin(phases)])
    (c0, cc, cs), *_ = np.linalg.lstsq(design, np.asarray(values, dtype=float), rcond=None)
    return math.atan2(-cs, cc), math.hypot(cc, cs), c0


def mz_fringes(spec: BeamsplitterSpec, phases) -> FringeTraces:
    """Output intensities for equal coherent fields with relative phase ``theta``.

    ``I_a = |t e^{i theta} + r|^2`` and ``I_b = |r e^{i theta} + t|^2``.
    """
    bsmath.validate(spec).raise_if_invalid()
    if abs(spec.r) == 0 or abs(spec.t) == 0:
        raise DomainError("fringes need both |r| and |t| nonzero; phase difference undefined")
    phases = np.asarray(phases, dtype=float)
    if phases.size < 3:
        raise DomainError("need at least three phase samples to fit a fringe")
    e = np.exp(1j * phases)
    ia = np.abs(spec.t * e + spec.r) ** 2
    ib = np.abs(spec.r * e + spec.t) ** 2
    psi_a, amp_a, off_a = fit_fringe_phase(phases, ia)
    psi_b, amp_b, off_b = fit_fringe_phase(phases, ib)
    return FringeTraces(
        phases=phases,
        intensity_a=ia,
        intensity_b=ib,
        phase_difference=wrap_angle(psi_a - psi_b),
        visibility_a=amp_a / off_a,
        visibility_b=amp_b / off_b,
    )


def classical_field_hom(
    spec: BeamsplitterSpec,
    delays,
    template: WavepacketSpec,
    n_phase_samples: int = 100_000,
    seed: int | None = 0,
    max_overlap: float = 1.0,
) -> ScanResult:
    """Intensity-correlation analogue of a HOM scan with classical fields.

    Two unit-intensity fields meet with a uniformly random relative phase;
    their mutual coherence at delay ``tau`` is ``sqrt(max_overlap * I(tau))``.
    The coincidence proxy is ``<I_a I_b>`` averaged over the phase samples.
    """
    if n_phase_samples < 1000:
        raise DomainError("n_phase_samples must be at least 1000")
    bsmath.validate(spec).raise_if_invalid()
    rng = np.random.default_rng(seed)
    phi = rng.uniform(0.0, 2 * math.pi, n_phase_samples)
    delays = np.asarray(delays, dtype=float)
    r, t = spec.r, spec.t
    mean = abs(r) ** 2 + abs(t) ** 2
    cross = 2 * abs(r) * abs(t)
    dphi = math.atan2(t.imag, t.real) - math.atan2(r.imag, r.real)

    def proxy(gamma):
        ia = mean + cross * gamma * np.cos(phi + dphi)
        ib = mean + cross * gamma * np.cos(phi - dphi)
        return float(np.mean(ia * ib))

    gammas = np.sqrt(max_overlap * overlap_values(template, delays))
    values = np.array([proxy(g) for g in gammas])
    baseline = proxy(0.0)
    extremum = proxy(math.sqrt(max_overlap))
    # sampling noise sits far above machine precision; flat only when exactly decoupled
    tol = FLAT_TOL if cross * max_overlap > 0 else math.inf
    kind, c = classify(baseline, extremum, tol=tol)
    return ScanResult(
        delays=delays,
        coincidence=values,
        baseline=baseline,
        extremum=extremum,
        kind=kind,
        contrast=c,
        max_overlap=max_overlap,
    )
