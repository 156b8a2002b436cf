"""Tests for core.tpsa"""

import numpy as np
import pytest
from scipy.optimize import brentq

from core.dispersion import FiberSpec, phase_mismatch
from core.errors import ConfigurationError, DomainError
from core.pump import PumpSpec
from core.tpsa import (
    PM_FRAME,
    FilterSpec,
    FrequencyGrid,
    TpsaGrid,
    apply_filter,
    apply_fiber,
    build_tpsa,
    far_field_discrepancy,
    far_field_validity,
    marginal,
    rotate_to_pm,
    tpsa_from_tpta,
    tpta_exact,
    tpta_far_field,
)
from tests.conftest import gaussian_tpsa


class TestFrequencyGrid:
    def test_axis_and_step(self, small_grid):
        axis = small_grid.axis
        assert axis[0] == -8e13 and axis[-1] == 8e13
        assert np.allclose(np.diff(axis), small_grid.step, rtol=1e-9)

    @pytest.mark.parametrize("n", [32, 100, 1000])
    def test_rejects_bad_size(self, n):
        with pytest.raises(ConfigurationError):
            FrequencyGrid(n=n, omega_max=8e13)

    def test_coverage(self, pump, crystal):
        with pytest.raises(ConfigurationError):
            build_tpsa(FrequencyGrid(n=64, omega_max=1e13), pump, crystal)


class TestBuild:
    def test_normalized(self, source_tpsa):
        assert source_tpsa.normalized
        assert source_tpsa.norm() == pytest.approx(1.0, abs=1e-12)

    def test_type_ii_asymmetry(self, source_tpsa):
        intensity = source_tpsa.intensity
        assert np.max(np.abs(intensity - intensity.T)) > 0.1 * intensity.max()

    def test_include_phase_keeps_modulus(self, small_grid, pump, crystal, source_tpsa):
        phased = build_tpsa(small_grid, pump, crystal, include_phase=True)
        assert np.allclose(np.abs(phased.values), np.abs(source_tpsa.values), atol=1e-12)

    def test_anti_phase_pump_empties_centre(self, small_grid, crystal):
        from core.pump import DoublePulse

        pump = PumpSpec(wavelength=404e-9, bandwidth=2e-9,
                        modulation=DoublePulse(separation=350e-15, phase=np.pi))
        tpsa = build_tpsa(small_grid, pump, crystal)
        # Ws + Wi = 0 lies on the anti-diagonal of the symmetric grid
        anti_diagonal = np.abs(np.fliplr(tpsa.values).diagonal())
        assert anti_diagonal.max() < 1e-6 * np.abs(tpsa.values).max()


class TestSincNull:
    def test_first_null_on_fixed_signal_cut(self, pump, crystal):
        grid = FrequencyGrid(n=512, omega_max=8e13)
        tpsa = build_tpsa(grid, pump, crystal)
        j = grid.n // 2
        omega_s = grid.axis[j]
        root = brentq(lambda w: float(phase_mismatch(omega_s, w, crystal)) * crystal.length / 2 - np.pi,
                      1e12, 1e13, xtol=1e3)
        line = tpsa.intensity[j]
        window = np.nonzero(np.abs(grid.axis - root) < 3 * grid.step)[0]
        k = window[np.argmin(line[window])]
        assert 0 < k < grid.n - 1
        assert line[k] < line[k - 1] and line[k] < line[k + 1]
        assert grid.axis[k] == pytest.approx(root, abs=grid.step)
        assert line[k] < 5e-3 * line.max()


class TestFiber:
    def test_zero_length_is_identity(self, source_tpsa):
        out = apply_fiber(source_tpsa, FiberSpec(length=0.0))
        assert np.array_equal(out.values, source_tpsa.values)
        assert out.chirp == 0.0

    def test_modulus_and_norm_unchanged(self, source_tpsa, fiber):
        out = apply_fiber(source_tpsa, fiber)
        assert np.max(np.abs(np.abs(out.values) - np.abs(source_tpsa.values))) < 1e-12
        assert out.norm() == pytest.approx(source_tpsa.norm(), abs=1e-12)
        assert out.chirp == fiber.scale

    def test_phase(self, fiber, small_grid):
        assert 0.5 * fiber.scale * 1e13 ** 2 == pytest.approx(1.075e3, rel=1e-12)
        flat = gaussian_tpsa(small_grid, 3e13)
        out = apply_fiber(flat, fiber)
        s, i = small_grid.mesh()
        expected = np.exp(0.5j * fiber.scale * (s ** 2 + i ** 2))
        assert np.allclose(out.values / flat.values, expected, atol=1e-9)

    def test_filter_commutes_with_fiber(self, source_tpsa, fiber):
        filt = FilterSpec.from_wavelength("signal", 1e-9, 808e-9)
        a = apply_filter(apply_fiber(source_tpsa, fiber), filt)
        b = apply_fiber(apply_filter(source_tpsa, filt), fiber)
        assert np.allclose(a.values, b.values, atol=1e-12)


class TestTimeAmplitude:
    def test_parseval(self, source_tpsa):
        assert tpta_exact(source_tpsa).norm() == pytest.approx(source_tpsa.norm(), abs=1e-6)

    def test_parseval_through_fiber(self, source_tpsa, fiber):
        tpta = tpta_exact(apply_fiber(source_tpsa, fiber))
        assert tpta.norm() == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_parseval_random_grid(self, seed, fiber):
        rng = np.random.default_rng(seed)
        grid = FrequencyGrid(n=64, omega_max=8e13)
        values = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
        tpsa = TpsaGrid(grid=grid, values=values).normalize()
        assert tpta_exact(tpsa).norm() == pytest.approx(1.0, abs=1e-10)
        assert tpta_exact(apply_fiber(tpsa, fiber)).norm() == pytest.approx(1.0, abs=1e-10)

    def test_roundtrip(self, source_tpsa):
        back = tpsa_from_tpta(tpta_exact(source_tpsa))
        assert np.max(np.abs(back.values - source_tpsa.values)) < 1e-10

    def test_gaussian_reciprocal_width(self):
        grid = FrequencyGrid(n=512, omega_max=8e13)
        sigma = 6.4 * grid.step
        tpta = tpta_exact(gaussian_tpsa(grid, sigma))
        t = tpta.time_axis
        density = tpta.intensity.sum(axis=1)
        std = np.sqrt(np.sum(density * t ** 2) / density.sum())
        assert std == pytest.approx(1 / (2 * sigma), rel=0.02)

    def test_inverse_needs_unpropagated(self, source_tpsa, fiber):
        with pytest.raises(DomainError):
            tpsa_from_tpta(tpta_exact(apply_fiber(source_tpsa, fiber)))

    def test_rotated_frame_rejected(self, source_tpsa):
        with pytest.raises(DomainError):
            tpta_exact(rotate_to_pm(source_tpsa))


class TestFarField:
    def test_zero_fiber(self, source_tpsa):
        with pytest.raises(DomainError):
            tpta_far_field(source_tpsa, FiberSpec(length=0.0))

    def test_peak_normalized(self, source_tpsa, fiber):
        far = tpta_far_field(source_tpsa, fiber)
        assert far.peak_normalized
        assert np.abs(far.values).max() == pytest.approx(1.0)

    def test_validity(self, source_tpsa, fiber):
        assert far_field_validity(source_tpsa, fiber)
        assert not far_field_validity(source_tpsa, FiberSpec(length=0.01))

    def test_chirp_is_removed_before_mapping(self, source_tpsa, fiber):
        plain = tpta_far_field(source_tpsa, fiber)
        chirped = tpta_far_field(apply_fiber(source_tpsa, fiber), fiber)
        assert np.allclose(np.abs(plain.values), np.abs(chirped.values), atol=1e-9)

    def test_exact_and_far_field_share_delay_sign(self, small_grid, fiber):
        # a detuned source lands at t = +k''l * W in both amplitudes
        tpsa = gaussian_tpsa(small_grid, 3e12, center_s=2e13, center_i=-1e13)
        exact = tpta_exact(apply_fiber(tpsa, fiber))
        far = tpta_far_field(tpsa, fiber)
        step = exact.step
        for amplitude in (exact, far):
            j, k = np.unravel_index(np.argmax(amplitude.intensity), amplitude.values.shape)
            assert amplitude.time_axis[j] == pytest.approx(fiber.scale * 2e13, abs=1.5 * step)
            assert amplitude.time_axis[k] == pytest.approx(-fiber.scale * 1e13, abs=1.5 * step)
        assert far_field_discrepancy(tpsa, fiber) < 0.02

    @pytest.mark.slow
    def test_discrepancy_shrinks_with_length(self, pump, crystal):
        tpsa = build_tpsa(FrequencyGrid(n=1024, omega_max=8e13), pump, crystal)
        values = [far_field_discrepancy(tpsa, FiberSpec(length=length))
                  for length in (50.0, 150.0, 500.0, 1500.0)]
        assert values[0] > values[1] > values[2] >= values[3]
        assert values[2] < 0.02


class TestFilter:
    def test_bandwidth_at_degenerate_wavelength(self):
        filt = FilterSpec.from_wavelength("idler", 1e-9, 808e-9)
        assert filt.bandwidth == pytest.approx(2.89e12, rel=2e-3)

    def test_transmission_fwhm(self):
        filt = FilterSpec(channel="signal", bandwidth=2e12)
        assert filt.transmission(np.array([1e12]))[0] ** 2 == pytest.approx(0.5, rel=1e-9)

    def test_invalid(self):
        with pytest.raises(ConfigurationError):
            FilterSpec(channel="pump", bandwidth=1e12)
        with pytest.raises(ConfigurationError):
            FilterSpec(channel="signal", bandwidth=0.0)

    def test_narrows_filtered_axis_only(self, small_grid):
        tpsa = gaussian_tpsa(small_grid, 1e13)
        out = apply_filter(tpsa, FilterSpec(channel="signal", bandwidth=5e12), renormalize=True)
        assert out.norm() == pytest.approx(1.0, abs=1e-12)

        def std(density):
            return np.sqrt(np.sum(density * small_grid.axis ** 2) / density.sum())

        assert std(marginal(out, 0)) < 0.5 * std(marginal(tpsa, 0))
        assert std(marginal(out, 1)) == pytest.approx(std(marginal(tpsa, 1)), rel=1e-6)

    def test_unfiltered_channel_is_identity(self, source_tpsa):
        out = apply_filter(source_tpsa, FilterSpec(channel="idler"))
        assert np.array_equal(out.values, source_tpsa.values)


class TestRotation:
    def test_frame_and_isotropic_invariance(self, small_grid):
        tpsa = gaussian_tpsa(small_grid, 5e12)
        rotated = rotate_to_pm(tpsa)
        assert rotated.frame == PM_FRAME
        peak = np.abs(tpsa.values).max()
        assert np.max(np.abs(np.abs(rotated.values) - np.abs(tpsa.values))) < 0.02 * peak

    def test_offset_peak_location(self, small_grid):
        tpsa = gaussian_tpsa(small_grid, 5e12, center_s=2e13)
        rotated = rotate_to_pm(tpsa)
        j, k = np.unravel_index(np.argmax(rotated.intensity), rotated.values.shape)
        axis = small_grid.axis
        assert axis[j] == pytest.approx(2e13 / np.sqrt(2), abs=1.5 * small_grid.step)
        assert axis[k] == pytest.approx(-2e13 / np.sqrt(2), abs=1.5 * small_grid.step)

    def test_twice_is_quarter_turn(self, small_grid):
        # (W+, W-) applied twice maps (Ws, Wi) to (Wi, -Ws)
        tpsa = gaussian_tpsa(small_grid, 5e12, sigma_i=8e12, center_s=1.5e13, center_i=5e12)
        twice = rotate_to_pm(rotate_to_pm(tpsa))
        peak = np.abs(tpsa.values).max()
        expected = np.rot90(tpsa.values, -1)
        assert np.max(np.abs(twice.values - expected)) < 0.02 * peak
        j, k = np.unravel_index(np.argmax(twice.intensity), twice.values.shape)
        axis = small_grid.axis
        assert axis[j] == pytest.approx(5e12, abs=1.5 * small_grid.step)
        assert axis[k] == pytest.approx(-1.5e13, abs=1.5 * small_grid.step)

    def test_diagonal_ridge_lands_on_plus_axis(self, small_grid):
        sigma = 4e12
        tpsa = TpsaGrid.from_function(
            small_grid,
            lambda s, i: np.exp(-(s - i) ** 2 / (4 * sigma ** 2) - (s + i) ** 2 / (4 * (4e13) ** 2)))
        rotated = rotate_to_pm(tpsa)
        axis = small_grid.axis
        over_minus = rotated.intensity.sum(axis=0)
        mean = np.sum(over_minus * axis) / over_minus.sum()
        std = np.sqrt(np.sum(over_minus * (axis - mean) ** 2) / over_minus.sum())
        assert abs(mean) < 0.1 * small_grid.step
        assert std == pytest.approx(sigma / np.sqrt(2), rel=0.05)
        over_plus = rotated.intensity.sum(axis=1)
        plus_std = np.sqrt(np.sum(over_plus * axis ** 2) / over_plus.sum())
        assert plus_std > 5 * std

    def test_filters_refuse_rotated_frame(self, source_tpsa):
        with pytest.raises(DomainError):
            apply_filter(rotate_to_pm(source_tpsa), FilterSpec(channel="signal", bandwidth=1e12))
