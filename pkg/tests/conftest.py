"""Shared fixtures: the reference source on reduced grids."""

import numpy as np
import pytest

from core.dispersion import CrystalSpec, FiberSpec
from core.pump import PumpSpec
from core.tpsa import FrequencyGrid, TpsaGrid, build_tpsa


@pytest.fixture(scope="session")
def crystal():
    return CrystalSpec(length=5e-3, pump_wavelength=404e-9)


@pytest.fixture(scope="session")
def pump():
    return PumpSpec(wavelength=404e-9, bandwidth=2e-9)


@pytest.fixture(scope="session")
def fiber():
    return FiberSpec(length=500.0)


@pytest.fixture(scope="session")
def small_grid():
    return FrequencyGrid(n=256, omega_max=8e13)


@pytest.fixture(scope="session")
def source_tpsa(small_grid, pump, crystal):
    return build_tpsa(small_grid, pump, crystal)


def gaussian_tpsa(grid, sigma_s, sigma_i=None, center_s=0.0, center_i=0.0):
    """Separable Gaussian amplitude; sigma is the rms width of |F|^2 per axis."""
    sigma_i = sigma_s if sigma_i is None else sigma_i
    return TpsaGrid.from_function(
        grid,
        lambda s, i: np.exp(-(s - center_s) ** 2 / (4 * sigma_s ** 2)
                            - (i - center_i) ** 2 / (4 * sigma_i ** 2)),
    )
