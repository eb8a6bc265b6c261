"""Gaussian single-particle wavepackets and their mutual overlap.

A packet is specified in the lab's terms: centre wavelength, intensity FWHM
of the spectrum (set by the interference filter) and a signed delay. The
spectral intensity is Gaussian in angular frequency with standard deviation
``sigma = dw / sqrt(8 ln 2)``, where ``dw = 2 pi c dlambda / lambda0**2``.

The overlap is ``|<f1|f2>|**2`` of the normalised spectral amplitudes
including the delay phase ``exp(i w tau)``. For two identical packets this
reduces to ``exp(-(sigma*tau)**2) = exp(-(dw*tau)**2 / (8 ln 2))``, so it
falls to ``1/e`` at ``tau = coherence_time``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import DomainError

FWHM_TO_SIGMA = 1.0 / math.sqrt(8.0 * math.log(2.0))


@dataclass(frozen=True)
class WavepacketSpec:
    center_wavelength: float = 806e-9  # m
    fwhm_wavelength: float = 1e-9  # m
    delay: float = 0.0  # s

    def __post_init__(self):
        if not self.center_wavelength > 0:
            raise DomainError("center_wavelength must be positive")
        if not self.fwhm_wavelength > 0:
            raise DomainError("fwhm_wavelength must be positive")
        if self.fwhm_wavelength >= 0.1 * self.center_wavelength:
            raise DomainError("narrowband model needs fwhm_wavelength << center_wavelength")
        if not math.isfinite(self.delay):
            raise DomainError("delay must be finite")

    @classmethod
    def from_dict(cls, data):
        return cls(
            center_wavelength=float(data.get("lambda0_nm", 806.0)) * 1e-9,
            fwhm_wavelength=float(data.get("fwhm_nm", 1.0)) * 1e-9,
            delay=float(data.get("delay_fs", 0.0)) * 1e-15,
        )

    def to_dict(self):
        return {
            "lambda0_nm": self.center_wavelength * 1e9,
            "fwhm_nm": self.fwhm_wavelength * 1e9,
            "delay_fs": self.delay * 1e15,
        }

    def delayed(self, delay):
        return replace(self, delay=delay)

    @property
    def center_frequency(self):
        """Angular frequency in rad/s."""
        return 2 * math.pi * SPEED_OF_LIGHT / self.center_wavelength

    @property
    def fwhm_frequency(self):
        """Intensity FWHM in angular frequency, rad/s."""
        return 2 * math.pi * SPEED_OF_LIGHT * self.fwhm_wavelength / self.center_wavelength ** 2

    @property
    def sigma(self):
        """Standard deviation of the spectral intensity, rad/s."""
        return self.fwhm_frequency * FWHM_TO_SIGMA


@dataclass(frozen=True)
class OverlapResult:
    value: float
    coherence_time: float


def coherence_time(spec: WavepacketSpec) -> float:
    """Delay at which two copies of ``spec`` overlap to ``1/e``; seconds."""
    return 1.0 / spec.sigma


def path_to_delay(path_difference):
    """Convert a path difference in metres to a delay in seconds."""
    return path_difference / SPEED_OF_LIGHT


def _closed_form(s1, s2, dw, tau):
    # |<f1|f2>|^2 for Gaussian amplitudes of intensity widths s1, s2
    ssum = s1 * s1 + s2 * s2
    pref = 2.0 * s1 * s2 / ssum
    return pref * np.exp(-dw * dw / (2.0 * ssum) - 2.0 * (s1 * s2 * tau) ** 2 / ssum)


def overlap(wp1: WavepacketSpec, wp2: WavepacketSpec) -> OverlapResult:
    tau = wp1.delay - wp2.delay
    value = float(
        _closed_form(wp1.sigma, wp2.sigma, wp1.center_frequency - wp2.center_frequency, tau)
    )
    return OverlapResult(min(max(value, 0.0), 1.0), coherence_time(wp1))


def scan_overlaps(template: WavepacketSpec, delays) -> list[OverlapResult]:
    values = overlap_values(template, delays)
    tc = coherence_time(template)
    return [OverlapResult(float(v), tc) for v in values]


def overlap_values(template: WavepacketSpec, delays) -> np.ndarray:
    """Vectorised overlap of ``template`` with copies shifted by ``delays``."""
    tau = np.asarray(delays, dtype=float)
    if not np.all(np.isfinite(tau)):
        raise DomainError("delays must be finite")
    s = template.sigma
    return np.clip(_closed_form(s, s, 0.0, tau), 0.0, 1.0)


def overlap_quadrature(wp1: WavepacketSpec, wp2: WavepacketSpec, span=12.0) -> float:
    """Reference overlap by direct numerical integration of the amplitudes."""
    tau = wp1.delay - wp2.delay
    # integrate in detuning from a common reference so the phase stays small
    ref = 0.5 * (wp1.center_frequency + wp2.center_frequency)
    d1 = wp1.center_frequency - ref
    d2 = wp2.center_frequency - ref
    s1, s2 = wp1.sigma, wp2.sigma

    def amp(x, d, s):
        return (2 * math.pi * s * s) ** -0.25 * np.exp(-((x - d) ** 2) / (4 * s * s))

    lo = min(d1 - span * s1, d2 - span * s2)
    hi = max(d1 + span * s1, d2 + span * s2)
    scale = max(s1, s2)

    def re(u):
        x = u * scale
        return amp(x, d1, s1) * amp(x, d2, s2) * math.cos(x * tau) * scale

    def im(u):
        x = u * scale
        return amp(x, d1, s1) * amp(x, d2, s2) * math.sin(x * tau) * scale

    opts = dict(epsabs=1e-13, epsrel=1e-11, limit=400)
    a, b = lo / scale, hi / scale
    real = integrate.quad(re, a, b, **opts)[0]
    imag = integrate.quad(im, a, b, **opts)[0]
    return real * real + imag * imag
