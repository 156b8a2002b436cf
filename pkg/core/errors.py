"""
Error Types
===========
Exception hierarchy shared by the simulator, the codecs and the CLI.
"""


class TpsaError(Exception):
    """Base class for all simulator errors."""
    pass


class ConfigurationError(TpsaError):
    """Invalid scenario document, unit string, grid coverage or PSF span."""
    pass


class DomainError(TpsaError, ValueError):
    """Numerical/physical domain violation (Sellmeier window, far-field undefined, ...)."""
    pass


class ComparisonError(TpsaError):
    """Distributions cannot be compared (disjoint or malformed axes)."""
    pass
