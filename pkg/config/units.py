"""
Unit Parsing
============
Explicit unit strings for scenario documents ("5 mm", "4.3e-28 s^2/cm").
Values are converted to SI; a bare number where a unit is required is rejected.
"""

import math
from typing import Dict, Tuple, Union

from core.errors import ConfigurationError

# unit -> (dimension, factor to SI)
UNIT_MAP: Dict[str, Tuple[str, float]] = {
    "m": ("length", 1.0),
    "km": ("length", 1e3),
    "cm": ("length", 1e-2),
    "mm": ("length", 1e-3),
    "um": ("length", 1e-6),
    "nm": ("length", 1e-9),
    "s": ("time", 1.0),
    "ms": ("time", 1e-3),
    "us": ("time", 1e-6),
    "ns": ("time", 1e-9),
    "ps": ("time", 1e-12),
    "fs": ("time", 1e-15),
    "rad": ("angle", 1.0),
    "deg": ("angle", math.pi / 180),
    "rad/s": ("angular_frequency", 1.0),
    "s^2/m": ("gvd", 1.0),
    "s^2/cm": ("gvd", 1e2),
    "s^2/km": ("gvd", 1e-3),
    "fs^2/mm": ("gvd", 1e-30 / 1e-3),
    "ps^2/km": ("gvd", 1e-24 / 1e3),
}


def parse_quantity(value: Union[str, float, int], dimension: str) -> float:
    """
    Convert a quantity string to SI.

    Args:
        value: "<number> <unit>" string; plain numbers only for "dimensionless"
        dimension: Expected dimension ("length", "time", "angle", "gvd",
                   "angular_frequency", "dimensionless")

    Returns:
        Value in SI units

    Raises:
        ConfigurationError: missing or unknown unit, or wrong dimension
    """
    if dimension == "dimensionless":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"expected a plain number, got {value!r}")
        return float(value)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if value == 0:
            return 0.0
        raise ConfigurationError(f"missing unit for {dimension} value {value!r}")
    if not isinstance(value, str):
        raise ConfigurationError(f"expected a quantity string, got {value!r}")
    parts = value.strip().split()
    if len(parts) != 2:
        raise ConfigurationError(f"quantity must be '<number> <unit>', got {value!r}")
    number, unit = parts
    if unit not in UNIT_MAP:
        raise ConfigurationError(f"unknown unit '{unit}' in {value!r}")
    unit_dimension, factor = UNIT_MAP[unit]
    if unit_dimension != dimension:
        raise ConfigurationError(
            f"unit '{unit}' is a {unit_dimension}, expected a {dimension} in {value!r}"
        )
    try:
        magnitude = float(number)
    except ValueError:
        raise ConfigurationError(f"invalid number '{number}' in {value!r}")
    if math.isnan(magnitude):
        raise ConfigurationError(f"not-a-number quantity {value!r}")
    return magnitude * factor


def list_units(dimension: str = None) -> Dict[str, Tuple[str, float]]:
    """Units known to the parser, optionally filtered by dimension."""
    return {
        unit: spec for unit, spec in UNIT_MAP.items()
        if dimension is None or spec[0] == dimension
    }
