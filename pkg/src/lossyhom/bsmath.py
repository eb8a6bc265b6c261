"""Closed-form physics of a single lossy two-port beamsplitter.

The splitter is described by one complex reflection amplitude ``r`` and one
transmission amplitude ``t``, seen identically from both inputs, giving the
symmetric transfer matrix::

    S = [[t, r],
         [r, t]]        rows: outputs (a, b), columns: inputs (1, 2)

Both eigenvalues ``t + r`` and ``t - r`` must have modulus at most one for
``S`` to be realisable by a passive device. Whatever is missing from
``|r|**2 + |t|**2`` per input is absorbed or scattered out of the two
detected modes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidInputError, PhysicalityError

EPS = 1e-12
_UNIT_SNAP = 5e-14


@dataclass(frozen=True)
class BeamsplitterSpec:
    r: complex
    t: complex
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "r", complex(self.r))
        object.__setattr__(self, "t", complex(self.t))

    @classmethod
    def from_polar(cls, r_abs, phi_r_deg, t_abs, phi_t_deg, label=""):
        r = cmath.rect(r_abs, math.radians(phi_r_deg))
        t = cmath.rect(t_abs, math.radians(phi_t_deg))
        return cls(r, t, label)

    @classmethod
    def from_dict(cls, data):
        """Build from ``{"r": [re, im], "t": [re, im]}`` or the polar keys."""
        label = data.get("label", "")
        if "r" in data and "t" in data:
            return cls(_pair_to_complex(data["r"]), _pair_to_complex(data["t"]), label)
        keys = ("r_abs", "phi_r_deg", "t_abs", "phi_t_deg")
        missing = [k for k in keys if k not in data]
        if missing:
            raise InvalidInputError(f"beamsplitter JSON missing keys: {missing}")
        return cls.from_polar(*(float(data[k]) for k in keys), label=label)

    def to_dict(self):
        return {
            "r": [self.r.real, self.r.imag],
            "t": [self.t.real, self.t.imag],
            "label": self.label,
        }

    @property
    def matrix(self):
        return np.array([[self.t, self.r], [self.r, self.t]], dtype=complex)

    def rotated(self, theta):
        """Same splitter with a global phase ``exp(1j*theta)`` applied."""
        g = cmath.exp(1j * theta)
        return BeamsplitterSpec(self.r * g, self.t * g, self.label)


def _pair_to_complex(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidInputError(f"expected [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    lossless: bool
    loss_fraction: float
    violations: tuple[str, ...] = field(default_factory=tuple)

    def raise_if_invalid(self):
        if not self.ok:
            raise PhysicalityError(self.violations)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Two-particle outcome probabilities after marginalising loss modes."""

    p_coincidence: float
    p_both_a: float
    p_both_b: float
    p_at_least_one_lost: float

    def as_array(self):
        return np.array(
            [self.p_coincidence, self.p_both_a, self.p_both_b, self.p_at_least_one_lost]
        )

    def total(self):
        return float(self.as_array().sum())


@dataclass(frozen=True)
class PhaseInfo:
    phi_r: float
    phi_t: float
    two_phi_rt: float


@dataclass(frozen=True)
class ModeTransform:
    """Linear map on mode operators, ``matrix[out, in]``."""

    matrix: np.ndarray
    unitary: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"mode transform must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self):
        return self.matrix.shape[0]

    def unitarity_error(self):
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.n_modes))))

    def is_unitary(self, tol=EPS):
        return self.unitarity_error() <= tol


def wrap_angle(x):
    """Wrap to the half-open interval (-pi, pi]."""
    w = math.remainder(x, 2 * math.pi)
    if w <= -math.pi + 1e-12:
        w = math.pi
    return w


def validate(spec: BeamsplitterSpec) -> ValidationReport:
    r, t = spec.r, spec.t
    for name, z in (("r", r), ("t", t)):
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise InvalidInputError(f"{name} is not finite: {z!r}")
    violations = []
    plus, minus = abs(r + t), abs(r - t)
    if plus > 1 + EPS:
        violations.append(f"|r+t| = {plus:.6g} > 1")
    if minus > 1 + EPS:
        violations.append(f"|r-t| = {minus:.6g} > 1")
    loss = 1.0 - abs(r) ** 2 - abs(t) ** 2
    return ValidationReport(
        ok=not violations,
        lossless=abs(loss) <= EPS,
        loss_fraction=loss,
        violations=tuple(violations),
    )


def _require_valid(spec):
    validate(spec).raise_if_invalid()


def _require_overlap(overlap):
    if not (0.0 <= overlap <= 1.0):
        raise DomainError(f"overlap must lie in [0, 1], got {overlap!r}")


def loss_fraction(spec: BeamsplitterSpec) -> float:
    """Probability that a single particle entering either port is lost."""
    _require_valid(spec)
    return min(max(1.0 - abs(spec.r) ** 2 - abs(spec.t) ** 2, 0.0), 1.0)


def phase_info(spec: BeamsplitterSpec) -> PhaseInfo:
    phi_r = cmath.phase(spec.r)
    phi_t = cmath.phase(spec.t)
    return PhaseInfo(phi_r, phi_t, wrap_angle(2 * (phi_t - phi_r)))


def interference_term(spec: BeamsplitterSpec) -> float:
    """``t**2 * conj(r)**2 + c.c.``, the sign-carrying two-particle term."""
    return 2.0 * (spec.t ** 2 * spec.r.conjugate() ** 2).real


def classical_coincidence(spec: BeamsplitterSpec) -> float:
    _require_valid(spec)
    return abs(spec.t) ** 4 + abs(spec.r) ** 4


def quantum_coincidence(spec: BeamsplitterSpec) -> float:
    _require_valid(spec)
    return abs(spec.t ** 2 + spec.r ** 2) ** 2


def coincidence_with_overlap(spec: BeamsplitterSpec, overlap: float) -> float:
    _require_valid(spec)
    _require_overlap(overlap)
    return abs(spec.t) ** 4 + abs(spec.r) ** 4 + interference_term(spec) * overlap


def two_particle_distribution(spec: BeamsplitterSpec, overlap: float) -> OutcomeDistribution:
    """Outcome probabilities for one particle entering each input port."""
    p_c = coincidence_with_overlap(spec, overlap)
    p_bunch = abs(spec.r * spec.t) ** 2 * (1.0 + overlap)
    p_lost = 1.0 - p_c - 2.0 * p_bunch
    clamp = lambda p: 0.0 if -EPS <= p < 0.0 else p
    return OutcomeDistribution(clamp(p_c), clamp(p_bunch), clamp(p_bunch), clamp(p_lost))


def detection_distribution(spec: BeamsplitterSpec, overlap: float) -> dict[tuple[int, int], float]:
    """Joint distribution of particle numbers ``(n_a, n_b)`` in the detected modes.

    Refines ``two_particle_distribution`` by splitting the lost branch into
    "one survives in a", "one survives in b" and "both lost". Needed by the
    detection-chain simulation, where a lone survivor still produces singles.
    """
    dist = two_particle_distribution(spec, overlap)
    r, t = spec.r, spec.t
    rt2 = abs(r * t) ** 2
    single = (abs(r) ** 2 + abs(t) ** 2) * (1.0 - abs(r) ** 2 - abs(t) ** 2)
    p_one = single - overlap * (2.0 * rt2 + interference_term(spec))
    p_one = max(p_one, 0.0)
    p_none = max(dist.p_at_least_one_lost - 2.0 * p_one, 0.0)
    return {
        (1, 1): dist.p_coincidence,
        (2, 0): dist.p_both_a,
        (0, 2): dist.p_both_b,
        (1, 0): p_one,
        (0, 1): p_one,
        (0, 0): p_none,
    }


def dilate(spec: BeamsplitterSpec) -> ModeTransform:
    """Embed the 2x2 transfer matrix into a 4x4 unitary.

    Modes 0, 1 are the detected ports; modes 2, 3 are environment modes
    that start in vacuum. With ``S = W diag(s) V^H`` and ``c = sqrt(1 - s**2)``::

        U = [[W s V^H,   -W c],
             [c V^H,        s]]

    For a lossless splitter ``c = 0`` and the environment decouples.
    """
    _require_valid(spec)
    s_mat = spec.matrix
    w, s, vh = np.linalg.svd(s_mat)
    # rounding noise on a unit singular value would leak ~1e-8 into c
    s = np.where(s >= 1.0 - _UNIT_SNAP, 1.0, s)
    c = np.sqrt(np.clip(1.0 - s ** 2, 0.0, None))
    u = np.empty((4, 4), dtype=complex)
    u[:2, :2] = (w * s) @ vh
    u[:2, 2:] = -w * c
    u[2:, :2] = c[:, None] * vh
    u[2:, 2:] = np.diag(s)
    # keep the exact input entries in the physical block
    u[:2, :2] = s_mat
    return ModeTransform(u, unitary=True)
