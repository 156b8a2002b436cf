"""Tests for core.dispersion"""

import numpy as np
import pytest

from config.constants import BBO_SELLMEIER_SETS
from core.dispersion import (
    EXTRAORDINARY,
    ORDINARY,
    POLARIZATIONS,
    CrystalSpec,
    FiberSpec,
    SellmeierCoefficients,
    extraordinary_index,
    group_delay_difference,
    gvd,
    index,
    phase_mismatch,
    solve_phase_matching_angle,
)
from core.errors import ConfigurationError, DomainError


class TestIndex:
    def test_ordinary_index_values(self):
        assert index(404e-9, ORDINARY) == pytest.approx(1.69251, abs=1e-5)
        assert index(808e-9, ORDINARY) == pytest.approx(1.66113, abs=1e-5)
        # hand values 1.6919 and 1.6608
        assert index(404e-9, ORDINARY) == pytest.approx(1.6919, abs=1e-3)
        assert index(808e-9, ORDINARY) == pytest.approx(1.6608, abs=1e-3)

    def test_extraordinary_index_values(self):
        assert index(404e-9, EXTRAORDINARY) == pytest.approx(1.56812, abs=1e-5)
        assert index(808e-9, EXTRAORDINARY) == pytest.approx(1.54603, abs=1e-5)

    def test_handbook_set(self):
        handbook = BBO_SELLMEIER_SETS["handbook"]
        assert SellmeierCoefficients(**handbook[ORDINARY]).evaluate(404e-9) == pytest.approx(1.69210, abs=1e-5)
        assert SellmeierCoefficients(**handbook[EXTRAORDINARY]).evaluate(808e-9) == pytest.approx(1.54423, abs=1e-5)

    def test_negative_birefringence(self):
        for wavelength in (404e-9, 808e-9):
            assert index(wavelength, ORDINARY) > index(wavelength, EXTRAORDINARY)

    def test_angle_limits(self):
        n_o = index(808e-9, ORDINARY)
        n_e = index(808e-9, EXTRAORDINARY)
        assert extraordinary_index(808e-9, 0.0) == pytest.approx(n_o, rel=1e-12)
        assert extraordinary_index(808e-9, np.pi / 2) == pytest.approx(n_e, rel=1e-12)

    def test_vectorized(self):
        wavelengths = np.array([404e-9, 600e-9, 808e-9])
        values = index(wavelengths)
        assert values.shape == (3,)
        assert np.all(np.diff(values) < 0)

    @pytest.mark.parametrize("wavelength", [200e-9, 1.2e-6])
    def test_outside_window(self, wavelength):
        with pytest.raises(DomainError):
            index(wavelength)

    def test_unknown_polarization(self):
        with pytest.raises(DomainError):
            index(808e-9, "circular")

    def test_normal_dispersion_in_window(self):
        assert gvd(808e-9, ORDINARY) > 0

    @pytest.mark.parametrize("polarization", POLARIZATIONS)
    def test_gvd_stable_under_step_halving(self, polarization):
        wavelengths = np.linspace(380e-9, 900e-9, 27)
        coarse = gvd(wavelengths, polarization, step=1e11)
        fine = gvd(wavelengths, polarization, step=5e10)
        assert np.all(np.abs(fine - coarse) < 0.01 * np.abs(fine))

    def test_extraordinary_index_monotone_in_angle(self):
        angles = np.linspace(0.0, np.pi / 2, 91)
        for wavelength in (404e-9, 808e-9):
            values = extraordinary_index(wavelength, angles)
            assert np.all(np.diff(values) < 0)


class TestPhaseMatching:
    def test_angle_range(self, crystal):
        theta = solve_phase_matching_angle(crystal)
        assert 41.0 < np.degrees(theta) < 42.0

    def test_residual_at_solution(self, crystal):
        theta = crystal.resolved_angle()
        assert abs(phase_mismatch(0.0, 0.0, crystal, theta=theta)) < 1e-3

    def test_sign_flip_around_solution(self, crystal):
        theta = crystal.resolved_angle()
        below = phase_mismatch(0.0, 0.0, crystal, theta=theta - np.radians(1))
        above = phase_mismatch(0.0, 0.0, crystal, theta=theta + np.radians(1))
        assert np.sign(below) != np.sign(above)

    def test_type_ii_asymmetry(self, crystal):
        # swapping signal and idler detunings changes the mismatch
        d = 5e12
        swapped = float(phase_mismatch(0.0, d, crystal))
        assert float(phase_mismatch(d, 0.0, crystal)) != pytest.approx(swapped, rel=1e-3)

    def test_explicit_cut_angle_is_used(self):
        spec = CrystalSpec(length=5e-3, pump_wavelength=404e-9, cut_angle=0.7)
        assert spec.resolved_angle() == 0.7

    def test_invalid_crystal(self):
        with pytest.raises(ConfigurationError):
            CrystalSpec(length=0.0, pump_wavelength=404e-9)
        with pytest.raises(ConfigurationError):
            CrystalSpec(length=5e-3, pump_wavelength=404e-9, cut_angle=2.0)


class TestGroupDelay:
    def test_linear_in_length(self):
        one = group_delay_difference(404e-9, 1e-3)
        five = group_delay_difference(404e-9, 5e-3)
        assert five / one == pytest.approx(5.0, rel=1e-12)

    def test_zero_length(self):
        assert group_delay_difference(404e-9, 0.0) == 0.0

    def test_one_millimetre_plate(self):
        assert group_delay_difference(404e-9, 1e-3) == pytest.approx(350e-15, rel=0.15)

    def test_five_millimetre_plate(self):
        assert group_delay_difference(404e-9, 5e-3) == pytest.approx(1.75e-12, rel=0.15)

    def test_calibrated_axis_angle(self):
        # 55.5 degrees gives 349.5 fs per millimetre
        assert group_delay_difference(404e-9, 1e-3) == pytest.approx(349.5e-15, rel=2e-3)
        nominal = group_delay_difference(404e-9, 1e-3, theta=np.pi / 4)
        assert nominal < 300e-15

    def test_negative_length(self):
        with pytest.raises(DomainError):
            group_delay_difference(404e-9, -1e-3)

    def test_outside_window(self):
        with pytest.raises(DomainError):
            group_delay_difference(250e-9, 1e-3)


class TestFiber:
    def test_scale(self, fiber):
        assert fiber.scale == pytest.approx(2.15e-23, rel=1e-12)

    def test_negative_length(self):
        with pytest.raises(ConfigurationError):
            FiberSpec(length=-1.0)
