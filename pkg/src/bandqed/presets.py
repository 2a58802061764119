"""Named device presets, stored in config units (frequencies in Hz).

The apcw entry is the alligator photonic-crystal waveguide operating point:
band edge at 333 THz with curvature alpha = 10.6, lattice constant 371 nm,
edge wavevector pi/a, single-cell coupling g_cell/2pi = 12.2 GHz and atomic
linewidth gamma/2pi = 5 MHz.  beta is derived from g_cell at load time, so
the preset stays internally consistent by construction.
"""

from __future__ import annotations

import copy

APCW = {
    "units": "si",
    "band": {
        "omega_b": 333.0e12,   # Hz
        "alpha": 10.6,
        "a": 371.0e-9,         # m
    },
    "coupling": {
        "g_cell": 12.2e9,      # Hz
        "gamma": 5.0e6,        # Hz
    },
}

PRESETS = {"apcw": APCW}


def get_preset(name: str) -> dict:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return copy.deepcopy(PRESETS[name])
