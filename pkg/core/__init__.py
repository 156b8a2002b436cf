"""
Core Simulation Module
======================
Dispersion models, pump spectra, TPSA grids, measurement model, analysis
and the scenario simulator.
"""

from .errors import ComparisonError, ConfigurationError, DomainError, TpsaError
from .simulator import TpsaSimulator, run_scenario

__all__ = [
    'TpsaError',
    'ConfigurationError',
    'DomainError',
    'ComparisonError',
    'TpsaSimulator',
    'run_scenario',
]
