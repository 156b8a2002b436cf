"""
Configuration Module
====================
Physical constants, unit parsing and scenario presets for the simulator.
Scenario documents are validated by `config.schema`.
"""

from .constants import (
    BBO_SELLMEIER,
    DEFAULT_GRID_POINTS,
    DEFAULT_OMEGA_MAX,
    FIBER_GVD,
    SPEED_OF_LIGHT,
)
from .units import UNIT_MAP, list_units, parse_quantity
from .scenarios import (
    SCENARIO_CONFIG,
    get_scenario_config,
    get_scenarios_by_category,
    list_available_scenarios,
    print_all_scenarios,
    print_scenario_info,
)

__all__ = [
    'BBO_SELLMEIER',
    'DEFAULT_GRID_POINTS',
    'DEFAULT_OMEGA_MAX',
    'FIBER_GVD',
    'SPEED_OF_LIGHT',
    'UNIT_MAP',
    'list_units',
    'parse_quantity',
    'SCENARIO_CONFIG',
    'get_scenario_config',
    'get_scenarios_by_category',
    'list_available_scenarios',
    'print_all_scenarios',
    'print_scenario_info',
]
