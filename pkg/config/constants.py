"""
Physical Constants
==================
Frozen dispersion data and reference-experiment defaults for the TPSA simulator.

BBO Sellmeier coefficients, all of the form

    n^2(lambda) = A + B / (lambda^2 - C) - D * lambda^2,   lambda in micrometres

The default is the Eimerl et al. set (J. Appl. Phys. 62, 1968, 1987). Its
group-index differences put the degenerate 404 -> 808 nm source at a tilt of
71.9 degrees and R = 2.67 in the narrow-filter limit. The handbook set
(Dmitriev, Gurzadyan & Nikogosyan) is kept for comparison.

Pinned index oracles of the default set:
    n_o(404 nm) = 1.69251,  n_o(808 nm) = 1.66113
    n_e(404 nm) = 1.56812,  n_e(808 nm) = 1.54603
"""

import math
from typing import Dict

from scipy.constants import c as SPEED_OF_LIGHT  # m/s

# Sellmeier sets, keyed by name then principal polarization
BBO_SELLMEIER_SETS: Dict[str, Dict[str, Dict[str, float]]] = {
    "eimerl": {
        "ordinary": {"A": 2.7405, "B": 0.0184, "C": 0.0179, "D": 0.0155},
        "extraordinary": {"A": 2.3730, "B": 0.0128, "C": 0.0156, "D": 0.0044},
    },
    "handbook": {
        "ordinary": {"A": 2.7359, "B": 0.01878, "C": 0.01822, "D": 0.01354},
        "extraordinary": {"A": 2.3753, "B": 0.01224, "C": 0.01667, "D": 0.01516},
    },
}

DEFAULT_SELLMEIER_SET = "eimerl"
BBO_SELLMEIER = BBO_SELLMEIER_SETS[DEFAULT_SELLMEIER_SET]

# Validity window of the coefficient set (metres)
SELLMEIER_WINDOW = (0.3e-6, 1.0e-6)

# Step for central-difference group velocities (rad/s)
GROUP_VELOCITY_STEP = 1.0e11

# Fibre GVD measured in the experiment: 4.3e-28 s^2/cm
FIBER_GVD = 4.3e-26  # s^2/m

# Reference experiment
EXPERIMENT_PUMP_WAVELENGTH = 404e-9       # m
EXPERIMENT_PUMP_BANDWIDTH = 2e-9          # m, intensity FWHM
EXPERIMENT_CRYSTAL_LENGTH = 5e-3          # m
EXPERIMENT_FIBER_LENGTH = 500.0           # m
EXPERIMENT_FILTER_BANDWIDTH = 1e-9        # m, intensity FWHM at the degenerate wavelength
EXPERIMENT_PSF_FWHM = 90e-12              # s

# Birefringent pulse splitter: the o replica against the e replica whose
# wavevector makes this angle with the optic axis. 55.5 degrees reproduces
# the measured 350 fs per millimetre at 404 nm with the default Sellmeier
# set; the nominal 45 degree cut would give 263 fs.
SPLITTER_AXIS_ANGLE = math.radians(55.5)

# Grid defaults
DEFAULT_GRID_POINTS = 1024
DEFAULT_OMEGA_MAX = 8.0e13           # rad/s

# Fringe heuristics
FRINGE_PEAK_THRESHOLD = 0.10
FRINGE_VALLEY_RATIO = 0.80

__all__ = [
    "SPEED_OF_LIGHT",
    "BBO_SELLMEIER",
    "BBO_SELLMEIER_SETS",
    "DEFAULT_SELLMEIER_SET",
    "SELLMEIER_WINDOW",
    "GROUP_VELOCITY_STEP",
    "FIBER_GVD",
    "EXPERIMENT_PUMP_WAVELENGTH",
    "EXPERIMENT_PUMP_BANDWIDTH",
    "EXPERIMENT_CRYSTAL_LENGTH",
    "EXPERIMENT_FIBER_LENGTH",
    "EXPERIMENT_FILTER_BANDWIDTH",
    "EXPERIMENT_PSF_FWHM",
    "SPLITTER_AXIS_ANGLE",
    "DEFAULT_GRID_POINTS",
    "DEFAULT_OMEGA_MAX",
    "FRINGE_PEAK_THRESHOLD",
    "FRINGE_VALLEY_RATIO",
]
