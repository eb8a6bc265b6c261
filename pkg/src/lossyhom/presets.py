"""Named beamsplitters of the two fabricated samples."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .bsmath import BeamsplitterSpec

PHASE_VARIANTS = ("design", "measured")


@dataclass(frozen=True)
class PresetEntry:
    name: str
    spec: BeamsplitterSpec
    note: str


@lru_cache(maxsize=None)
def _table():
    text = resources.files("lossyhom").joinpath("data/presets.json").read_text()
    return json.loads(text)


def preset_names():
    return sorted(_table())


def get_preset(name: str, phase: str = "measured") -> PresetEntry:
    """Look up a sample by name; ``phase`` picks the design or measured 2*phi_rt.

    The phase is put entirely on ``t`` (``phi_r = 0``), so
    ``phi_t = two_phi_rt / 2``.
    """
    table = _table()
    if name not in table:
        raise KeyError(f"unknown preset {name!r}; choose from {preset_names()}")
    if phase not in PHASE_VARIANTS:
        raise KeyError(f"unknown phase variant {phase!r}; choose from {PHASE_VARIANTS}")
    row = table[name]
    two_phi = row["two_phi_rt_deg"][phase]
    spec = BeamsplitterSpec.from_polar(
        row["r_abs"], 0.0, row["t_abs"], two_phi / 2.0, label=f"{name} ({phase})"
    )
    return PresetEntry(name, spec, row["note"])


def all_presets():
    return [get_preset(n, p) for n in preset_names() for p in PHASE_VARIANTS]
