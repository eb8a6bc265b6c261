import math

import numpy as np
import pytest

from lossyhom.errors import DomainError
from lossyhom.wavepacket import (
    WavepacketSpec,
    coherence_time,
    overlap,
    overlap_quadrature,
    overlap_values,
    path_to_delay,
    scan_overlaps,
)

DEFAULT = WavepacketSpec()
TC = coherence_time(DEFAULT)


def test_coherence_time_default():
    c = 299792458.0
    dw = 2 * math.pi * c * 1e-9 / (806e-9) ** 2
    assert TC == pytest.approx(math.sqrt(8 * math.log(2)) / dw, rel=1e-12)
    assert TC == pytest.approx(0.81e-12, abs=0.01e-12)


def test_coherence_time_scaling():
    narrow = WavepacketSpec(fwhm_wavelength=0.5e-9)
    wide = WavepacketSpec(fwhm_wavelength=2e-9)
    assert coherence_time(wide) == pytest.approx(TC / 2, rel=1e-12)
    assert coherence_time(narrow) == pytest.approx(2 * TC, rel=1e-12)
    assert coherence_time(WavepacketSpec(fwhm_wavelength=1e-18)) > 1e-4


def test_identity_and_far_limit():
    assert overlap(DEFAULT, DEFAULT).value == 1.0
    assert overlap(DEFAULT.delayed(60 * TC), DEFAULT).value < 1e-300
    assert overlap(DEFAULT.delayed(-60 * TC), DEFAULT).value < 1e-300


def test_one_over_e_at_coherence_time():
    assert overlap(DEFAULT.delayed(TC), DEFAULT).value == pytest.approx(math.exp(-1), abs=1e-6)
    assert overlap_quadrature(DEFAULT.delayed(TC), DEFAULT) == pytest.approx(
        math.exp(-1), abs=1e-6
    )


def test_closed_form_matches_quadrature():
    for k in np.linspace(-5, 5, 41):
        wp = DEFAULT.delayed(k * TC)
        assert overlap(wp, DEFAULT).value == pytest.approx(
            overlap_quadrature(wp, DEFAULT), abs=1e-6
        )


@pytest.mark.parametrize(
    "other",
    [WavepacketSpec(806.5e-9, 1e-9), WavepacketSpec(806e-9, 2e-9), WavepacketSpec(805e-9, 0.7e-9)],
)
def test_mismatched_packets_match_quadrature(other):
    for k in (-2, -0.5, 0, 0.7, 3):
        wp = DEFAULT.delayed(k * TC)
        assert overlap(wp, other).value == pytest.approx(overlap_quadrature(wp, other), abs=1e-6)
        assert overlap(wp, other).value < 1


def test_scan_overlaps_properties():
    assert [r.value for r in scan_overlaps(DEFAULT, [0.0])] == [1.0]
    pos = np.linspace(0, 5, 51)[1:] * TC
    grid = np.concatenate([-pos[::-1], [0.0], pos])
    vals = overlap_values(DEFAULT, grid)
    np.testing.assert_array_equal(vals, vals[::-1])
    assert np.all((vals >= 0) & (vals <= 1))
    half = vals[50:]
    assert np.all(np.diff(half) <= 0)
    oracle = [overlap_quadrature(DEFAULT.delayed(t), DEFAULT) for t in grid[::5]]
    np.testing.assert_allclose(vals[::5], oracle, atol=1e-6)


def test_delay_sign_convention():
    a = overlap(DEFAULT.delayed(0.3 * TC), DEFAULT.delayed(-0.2 * TC)).value
    assert a == pytest.approx(math.exp(-0.25), rel=1e-12)


def test_path_to_delay():
    assert path_to_delay(299792458.0) == pytest.approx(1.0)


def test_json_round_trip():
    wp = WavepacketSpec.from_dict({"lambda0_nm": 810, "fwhm_nm": 2, "delay_fs": 150})
    assert wp.center_wavelength == pytest.approx(810e-9)
    back = WavepacketSpec.from_dict(wp.to_dict())
    assert back.delay == pytest.approx(wp.delay)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(center_wavelength=0),
        dict(fwhm_wavelength=-1e-9),
        dict(fwhm_wavelength=200e-9),
        dict(delay=float("inf")),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(DomainError):
        WavepacketSpec(**kwargs)


def test_non_finite_delays():
    with pytest.raises(DomainError):
        overlap_values(DEFAULT, [0.0, float("nan")])
