import cmath
import math

import numpy as np
import pytest

from lossyhom.bsmath import BeamsplitterSpec, validate

ACCEPTANCE_LINES = []


def random_valid_specs(rng, n):
    """Uniform-ish sampling of sub-unitary symmetric splitters by rejection."""
    out = []
    while len(out) < n:
        r = cmath.rect(rng.uniform(0, 1), rng.uniform(-math.pi, math.pi))
        t = cmath.rect(rng.uniform(0, 1), rng.uniform(-math.pi, math.pi))
        spec = BeamsplitterSpec(r, t)
        if validate(spec).ok:
            out.append(spec)
    return out


def boundary_specs(rng, n):
    """Specs with |t + r| = 1 or |t - r| = 1 (or both)."""
    out = []
    for k in range(n):
        on = cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        rho = 1.0 if k % 4 == 0 else rng.uniform(0, 1)
        other = rho * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        s, d = (on, other) if k % 2 else (other, on)
        out.append(BeamsplitterSpec((s - d) / 2, (s + d) / 2))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
