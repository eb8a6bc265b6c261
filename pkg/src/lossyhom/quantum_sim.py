"""Brute-force Fock-space propagation through small linear-optical networks.

This is the reference path the analytic formulas in :mod:`lossyhom.bsmath`
are checked against. It knows nothing about reflection or transmission
coefficients: it only takes a unitary and an input occupation pattern and
enumerates every output pattern.

Amplitude rule for input occupations ``n`` and output occupations ``m``::

    <m| U |n> = perm(U[rows(m), cols(n)]) / sqrt(prod(n!) * prod(m!))

where ``rows(m)`` repeats output mode ``j`` ``m_j`` times and ``cols(n)``
repeats input mode ``i`` ``n_i`` times.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .bsmath import EPS, ModeTransform, OutcomeDistribution
from .errors import DomainError

__all__ = [
    "FockState",
    "LabeledParticleState",
    "ModeTransform",
    "permanent",
    "output_distribution_indistinguishable",
    "output_distribution_distinguishable",
    "propagate",
    "marginalize_loss",
]

MAX_PERMANENT_SIZE = 8


@dataclass(frozen=True)
class FockState:
    occupations: tuple[int, ...]
    mode_labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        occ = tuple(int(n) for n in self.occupations)
        if any(n < 0 for n in occ):
            raise DomainError(f"negative occupation in {occ}")
        object.__setattr__(self, "occupations", occ)

    @property
    def n_particles(self):
        return sum(self.occupations)

    @property
    def n_modes(self):
        return len(self.occupations)

    def mode_list(self):
        """Mode index of each particle, e.g. (2, 0, 1) -> [0, 0, 2]."""
        return [i for i, n in enumerate(self.occupations) for _ in range(n)]


@dataclass(frozen=True)
class LabeledParticleState:
    """Particles with individual mode indices.

    ``identical=True`` means the particles are perfectly indistinguishable
    bosons; otherwise each carries its own tag (e.g. arrival time) and they
    do not interfere.
    """

    modes: tuple[int, ...]
    n_modes: int
    identical: bool = False

    def to_fock(self):
        occ = [0] * self.n_modes
        for m in self.modes:
            occ[m] += 1
        return FockState(tuple(occ))


def permanent(matrix) -> complex:
    """Matrix permanent via Ryser's inclusion-exclusion formula."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n > MAX_PERMANENT_SIZE:
        raise DomainError(f"permanent limited to n <= {MAX_PERMANENT_SIZE}, got {n}")
    total = 0j
    cols = range(n)
    for k in range(1, n + 1):
        sign = (-1) ** k
        for subset in itertools.combinations(cols, k):
            total += sign * np.prod(a[:, subset].sum(axis=1))
    return complex((-1) ** n * total)


def _fock_basis(n_modes, n_particles):
    for combo in itertools.combinations_with_replacement(range(n_modes), n_particles):
        occ = [0] * n_modes
        for m in combo:
            occ[m] += 1
        yield tuple(occ)


def _check_unitary(u):
    if not isinstance(u, ModeTransform):
        u = ModeTransform(u)
    if not u.is_unitary(1e-10):
        raise DomainError(
            f"mode transform is not unitary (error {u.unitarity_error():.2e}); dilate it first"
        )
    return u


def output_distribution_indistinguishable(state: FockState, u) -> dict[FockState, float]:
    u = _check_unitary(u)
    if state.n_modes != u.n_modes:
        raise DomainError(f"state has {state.n_modes} modes, transform has {u.n_modes}")
    cols = state.mode_list()
    norm_in = math.prod(math.factorial(n) for n in state.occupations)
    out = {}
    for occ in _fock_basis(u.n_modes, state.n_particles):
        rows = [j for j, m in enumerate(occ) for _ in range(m)]
        norm_out = math.prod(math.factorial(m) for m in occ)
        amp = permanent(u.matrix[np.ix_(rows, cols)]) / math.sqrt(norm_in * norm_out)
        out[FockState(occ)] = abs(amp) ** 2
    return out


def output_distribution_distinguishable(state: LabeledParticleState, u) -> dict[FockState, float]:
    """Propagate each particle on its own and convolve the occupation patterns."""
    u = _check_unitary(u)
    single = np.abs(u.matrix) ** 2  # single[j, i] = P(i -> j)
    dist = {tuple([0] * u.n_modes): 1.0}
    for mode in state.modes:
        nxt = defaultdict(float)
        for occ, p in dist.items():
            for j in range(u.n_modes):
                q = single[j, mode]
                if q == 0.0:
                    continue
                new = list(occ)
                new[j] += 1
                nxt[tuple(new)] += p * q
        dist = nxt
    return {FockState(occ): float(p) for occ, p in dist.items()}


def propagate(state: LabeledParticleState, u) -> dict[FockState, float]:
    if state.identical:
        return output_distribution_indistinguishable(state.to_fock(), u)
    return output_distribution_distinguishable(state, u)


def marginalize_loss(dist, detected_modes=(0, 1)) -> OutcomeDistribution:
    """Sum environment modes out of a two-particle output distribution."""
    a, b = detected_modes
    p = {"c": 0.0, "a": 0.0, "b": 0.0, "lost": 0.0}
    for state, prob in dist.items():
        occ = state.occupations if isinstance(state, FockState) else tuple(state)
        n_a, n_b = occ[a], occ[b]
        n_env = sum(occ) - n_a - n_b
        if n_env > 0:
            p["lost"] += prob
        elif n_a == 1 and n_b == 1:
            p["c"] += prob
        elif n_a == 2:
            p["a"] += prob
        elif n_b == 2:
            p["b"] += prob
        else:
            raise DomainError(f"marginalize_loss expects two particles, got {occ}")
    return OutcomeDistribution(p["c"], p["a"], p["b"], p["lost"])


def detected_counts(dist, detected_modes=(0, 1)) -> dict[tuple[int, int], float]:
    """Distribution of ``(n_a, n_b)`` with every other mode traced out."""
    a, b = detected_modes
    out = defaultdict(float)
    for state, prob in dist.items():
        occ = state.occupations
        out[(occ[a], occ[b])] += prob
    return dict(out)


def total_probability(dist) -> float:
    return float(sum(dist.values()))


def is_normalized(dist, tol=EPS * 100):
    return abs(total_probability(dist) - 1.0) <= tol
