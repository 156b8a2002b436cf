"""
Pump Spectrum Models
====================
Gaussian pump pulse and the birefringently split double pulse whose
spectrum carries a cosine modulation of period 2*pi/tau.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from config.constants import SPEED_OF_LIGHT
from .dispersion import group_delay_difference
from .errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

FWHM_TO_SIGMA = 1.0 / (2.0 * np.sqrt(2.0 * np.log(2.0)))

PEAK = "peak"
ENERGY = "energy"


@dataclass(frozen=True)
class DoublePulse:
    """
    Two pump replicas separated by `separation` seconds.

    Args:
        separation: Delay tau between the pulses (s)
        phase: Relative phase phi (rad)
        amplitude_ratio: r, amplitude of the second replica relative to the first
    """
    separation: float
    phase: float = 0.0
    amplitude_ratio: float = 1.0

    def __post_init__(self):
        if self.separation < 0:
            raise ConfigurationError(f"pulse separation must be >= 0, got {self.separation}")
        if not 0 < self.amplitude_ratio <= 1:
            raise ConfigurationError(
                f"amplitude ratio must lie in (0, 1], got {self.amplitude_ratio}"
            )


@dataclass(frozen=True)
class PumpSpec:
    """
    Pump pulse.

    Args:
        wavelength: Central wavelength (m)
        bandwidth: Intensity FWHM in wavelength (m)
        modulation: None for a single pulse, DoublePulse otherwise
        normalization: "peak" (maximum amplitude 1) or "energy" (unit spectral energy)
    """
    wavelength: float
    bandwidth: float
    modulation: Optional[DoublePulse] = None
    normalization: str = PEAK

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ConfigurationError(f"pump wavelength must be > 0, got {self.wavelength}")
        if not self.bandwidth > 0:
            raise ConfigurationError(f"pump bandwidth must be > 0, got {self.bandwidth}")
        if self.normalization not in (PEAK, ENERGY):
            raise ConfigurationError(f"unknown normalization '{self.normalization}'")

    @property
    def center_omega(self) -> float:
        return 2 * np.pi * SPEED_OF_LIGHT / self.wavelength

    @property
    def sigma(self) -> float:
        return bandwidth_to_sigma(self.bandwidth, self.wavelength)


def bandwidth_to_fwhm(bandwidth: float, center_wavelength: float) -> float:
    """Angular-frequency FWHM 2*pi*c*dlambda/lambda^2 (rad/s)."""
    if bandwidth < 0 or not center_wavelength > 0:
        raise DomainError("bandwidth must be >= 0 and wavelength > 0")
    return 2 * np.pi * SPEED_OF_LIGHT * bandwidth / center_wavelength ** 2


def bandwidth_to_sigma(bandwidth: float, center_wavelength: float) -> float:
    """
    RMS width of the spectral intensity for an intensity-FWHM bandwidth.

    Args:
        bandwidth: Intensity FWHM in wavelength (m)
        center_wavelength: Central wavelength (m)

    Returns:
        sigma_omega in rad/s, so that |amplitude|^2 = exp(-W^2 / (2 sigma^2))
    """
    return bandwidth_to_fwhm(bandwidth, center_wavelength) * FWHM_TO_SIGMA


def _envelope(omega_p: np.ndarray, sigma: float) -> np.ndarray:
    # amplitude of a Gaussian intensity with rms width sigma
    return np.exp(-omega_p ** 2 / (4 * sigma ** 2))


def _normalizer(spec: PumpSpec) -> float:
    mod = spec.modulation
    if spec.normalization == PEAK:
        return 1.0 if mod is None else 1.0 + mod.amplitude_ratio
    base = spec.sigma * np.sqrt(2 * np.pi)
    if mod is None:
        return np.sqrt(base)
    r = mod.amplitude_ratio
    overlap = np.cos(mod.phase) * np.exp(-(spec.sigma * mod.separation) ** 2 / 2)
    return np.sqrt(base * (1 + r ** 2 + 2 * r * overlap))


def pump_amplitude(omega_p: ArrayLike, spec: PumpSpec) -> np.ndarray:
    """
    Complex pump spectral amplitude at detuning omega_p from the pump centre.

    Single pulse: Gaussian envelope. Double pulse:
    envelope * [exp(i W tau/2) + r exp(i phi) exp(-i W tau/2)] / normalizer,
    so that |amplitude|^2 ~ cos^2(W tau/2 - phi/2) for r = 1.
    """
    omega_p = np.asarray(omega_p, dtype=float)
    amplitude = _envelope(omega_p, spec.sigma).astype(complex)
    mod = spec.modulation
    if mod is not None:
        half = omega_p * mod.separation / 2
        amplitude = amplitude * (np.exp(1j * half)
                                 + mod.amplitude_ratio * np.exp(1j * mod.phase) * np.exp(-1j * half))
    return amplitude / _normalizer(spec)


def pump_intensity(omega_p: ArrayLike, spec: PumpSpec) -> np.ndarray:
    return np.abs(pump_amplitude(omega_p, spec)) ** 2


def modulation_period(spec: PumpSpec) -> float:
    """Spectral modulation period 2*pi/tau (rad/s); inf for an unmodulated pump."""
    if spec.modulation is None or spec.modulation.separation == 0:
        return np.inf
    return 2 * np.pi / spec.modulation.separation


def spectrum_vs_wavelength(wavelengths: ArrayLike, spec: PumpSpec) -> np.ndarray:
    """Pump spectral intensity sampled on a wavelength axis (m)."""
    omega = 2 * np.pi * SPEED_OF_LIGHT / np.asarray(wavelengths, dtype=float)
    return pump_intensity(omega - spec.center_omega, spec)


def double_pulse_from_crystal(splitter_length: float, phase: float,
                              pump_wavelength: float) -> DoublePulse:
    """
    Double pulse produced by a birefringent splitter plate.

    The pump polarization sits at 45 degrees to the plate's axes, so both
    replicas carry equal amplitude (r = 1).

    Args:
        splitter_length: Plate length (m)
        phase: Relative phase between the replicas (rad)
        pump_wavelength: Pump central wavelength (m)
    """
    tau = group_delay_difference(pump_wavelength, splitter_length)
    logger.info("splitter %.2f mm -> separation %.1f fs", splitter_length * 1e3, tau * 1e15)
    return DoublePulse(separation=tau, phase=phase, amplitude_ratio=1.0)
