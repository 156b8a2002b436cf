"""
Dispersion Models
=================
Refractive index and wavevector models for BBO and the transmission fibre:
Sellmeier indices, phase mismatch for degenerate collinear type-II SPDC,
phase-matching angle solver and birefringent group-delay difference.

All functions are pure and accept numpy arrays wherever a scalar is shown.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy.optimize import bisect

from config.constants import (
    BBO_SELLMEIER,
    FIBER_GVD,
    GROUP_VELOCITY_STEP,
    SELLMEIER_WINDOW,
    SPEED_OF_LIGHT,
    SPLITTER_AXIS_ANGLE,
)
from .errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

ORDINARY = "ordinary"
EXTRAORDINARY = "extraordinary"
POLARIZATIONS = (ORDINARY, EXTRAORDINARY)

# |dk(0,0)| accepted at the solved angle (rad/m)
PHASE_MATCHING_TOLERANCE = 1e-3


@dataclass(frozen=True)
class SellmeierCoefficients:
    """n^2 = A + B/(lambda^2 - C) - D*lambda^2 with lambda in micrometres."""
    A: float
    B: float
    C: float
    D: float

    def evaluate(self, wavelength: ArrayLike) -> ArrayLike:
        lam2 = (np.asarray(wavelength, dtype=float) * 1e6) ** 2
        return np.sqrt(self.A + self.B / (lam2 - self.C) - self.D * lam2)


BBO_ORDINARY = SellmeierCoefficients(**BBO_SELLMEIER[ORDINARY])
BBO_EXTRAORDINARY = SellmeierCoefficients(**BBO_SELLMEIER[EXTRAORDINARY])


@dataclass(frozen=True)
class CrystalSpec:
    """
    Type-II BBO crystal: pump (e) -> signal (o) + idler (e).

    Args:
        length: Crystal length in metres
        pump_wavelength: Pump central wavelength in metres
        cut_angle: Optic-axis angle in radians; None means solve for degenerate matching
    """
    length: float
    pump_wavelength: float
    cut_angle: Optional[float] = None

    def __post_init__(self):
        if not self.length > 0:
            raise ConfigurationError(f"crystal length must be > 0, got {self.length}")
        if not self.pump_wavelength > 0:
            raise ConfigurationError(f"pump wavelength must be > 0, got {self.pump_wavelength}")
        if self.cut_angle is not None and not 0 < self.cut_angle < np.pi / 2:
            raise ConfigurationError(f"cut angle must lie in (0, pi/2), got {self.cut_angle}")

    @property
    def pump_omega(self) -> float:
        return 2 * np.pi * SPEED_OF_LIGHT / self.pump_wavelength

    @property
    def degenerate_omega(self) -> float:
        return self.pump_omega / 2

    def resolved_angle(self) -> float:
        """Cut angle, solving for exact degenerate phase matching when unset."""
        if self.cut_angle is not None:
            return self.cut_angle
        return solve_phase_matching_angle(self)


@dataclass(frozen=True)
class FiberSpec:
    """
    Non-birefringent fibre with equal GVD for both photons.

    Args:
        length: Fibre length in metres
        gvd: k'' in s^2/m
    """
    length: float
    gvd: float = FIBER_GVD

    def __post_init__(self):
        if self.length < 0:
            raise ConfigurationError(f"fibre length must be >= 0, got {self.length}")

    @property
    def scale(self) -> float:
        """Far-field scale k''*l (s^2): t = scale * Omega."""
        return self.length * self.gvd


def _check_window(wavelength: ArrayLike):
    lam = np.asarray(wavelength, dtype=float)
    lo, hi = SELLMEIER_WINDOW
    if np.any(~np.isfinite(lam)) or np.any(lam < lo) or np.any(lam > hi):
        raise DomainError(
            f"wavelength outside Sellmeier window {lo * 1e9:.0f}-{hi * 1e9:.0f} nm "
            f"(got {np.min(lam) * 1e9:.1f}-{np.max(lam) * 1e9:.1f} nm)"
        )


def index(wavelength: ArrayLike, polarization: str = ORDINARY) -> ArrayLike:
    """
    Principal refractive index of BBO.

    Args:
        wavelength: Vacuum wavelength in metres
        polarization: "ordinary" or "extraordinary" (principal index n_e)

    Returns:
        Refractive index n(lambda)
    """
    if polarization not in POLARIZATIONS:
        raise DomainError(f"unknown polarization '{polarization}', expected one of {POLARIZATIONS}")
    _check_window(wavelength)
    coeffs = BBO_ORDINARY if polarization == ORDINARY else BBO_EXTRAORDINARY
    return coeffs.evaluate(wavelength)


def extraordinary_index(wavelength: ArrayLike, theta: ArrayLike) -> ArrayLike:
    """
    Extraordinary index at angle theta to the optic axis.

    1/n^2(theta) = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2
    """
    n_o = index(wavelength, ORDINARY)
    n_e = index(wavelength, EXTRAORDINARY)
    inv = np.cos(theta) ** 2 / n_o ** 2 + np.sin(theta) ** 2 / n_e ** 2
    return 1.0 / np.sqrt(inv)


def wavevector(omega: ArrayLike, polarization: str = ORDINARY,
               theta: Optional[float] = None) -> ArrayLike:
    """
    Wavevector k(omega) = n(omega) * omega / c in rad/m.

    Args:
        omega: Angular frequency in rad/s
        polarization: "ordinary" or "extraordinary"
        theta: Propagation angle to the optic axis for extraordinary waves;
               None gives the principal extraordinary index
    """
    omega = np.asarray(omega, dtype=float)
    wavelength = 2 * np.pi * SPEED_OF_LIGHT / omega
    if polarization == EXTRAORDINARY and theta is not None:
        n = extraordinary_index(wavelength, theta)
    else:
        n = index(wavelength, polarization)
    return n * omega / SPEED_OF_LIGHT


def phase_mismatch(omega_s: ArrayLike, omega_i: ArrayLike, crystal: CrystalSpec,
                   theta: Optional[float] = None) -> ArrayLike:
    """
    Collinear type-II phase mismatch for detunings from degeneracy.

    dk = k_p(w_p0 + Ws + Wi) - k_s(w_0 + Ws) - k_i(w_0 + Wi),
    pump and idler extraordinary at theta, signal ordinary.

    Args:
        omega_s: Signal detuning in rad/s
        omega_i: Idler detuning in rad/s
        crystal: Crystal parameters
        theta: Angle override; defaults to the crystal's resolved angle

    Returns:
        dk in rad/m, broadcast over the inputs
    """
    if theta is None:
        theta = crystal.resolved_angle()
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    w0 = crystal.degenerate_omega
    k_p = wavevector(crystal.pump_omega + omega_s + omega_i, EXTRAORDINARY, theta)
    k_s = wavevector(w0 + omega_s, ORDINARY)
    k_i = wavevector(w0 + omega_i, EXTRAORDINARY, theta)
    return k_p - k_s - k_i


@lru_cache(maxsize=64)
def solve_phase_matching_angle(crystal: CrystalSpec) -> float:
    """
    Angle giving dk(0, 0) = 0, found by bisection on (0, pi/2).

    Raises:
        DomainError: no sign change in the bracket
    """
    def mismatch(theta: float) -> float:
        return float(phase_mismatch(0.0, 0.0, crystal, theta=theta))

    lo, hi = 1e-6, np.pi / 2 - 1e-6
    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise DomainError(
            f"no phase-matching solution for pump {crystal.pump_wavelength * 1e9:.1f} nm"
        )
    theta = bisect(mismatch, lo, hi, xtol=1e-15, maxiter=200)
    residual = abs(mismatch(theta))
    if residual > PHASE_MATCHING_TOLERANCE:
        logger.warning("phase-matching residual %.3e rad/m above tolerance", residual)
    logger.debug("phase-matching angle %.6f deg", np.degrees(theta))
    return theta


def inverse_group_velocity(omega: ArrayLike, polarization: str = ORDINARY,
                           theta: Optional[float] = None,
                           step: float = GROUP_VELOCITY_STEP) -> ArrayLike:
    """dk/domega (s/m) by central finite difference."""
    k_plus = wavevector(np.asarray(omega) + step, polarization, theta)
    k_minus = wavevector(np.asarray(omega) - step, polarization, theta)
    return (k_plus - k_minus) / (2 * step)


def group_index(wavelength: ArrayLike, polarization: str = ORDINARY,
                theta: Optional[float] = None) -> ArrayLike:
    omega = 2 * np.pi * SPEED_OF_LIGHT / np.asarray(wavelength, dtype=float)
    return SPEED_OF_LIGHT * inverse_group_velocity(omega, polarization, theta)


def gvd(wavelength: ArrayLike, polarization: str = ORDINARY,
        theta: Optional[float] = None, step: float = GROUP_VELOCITY_STEP) -> ArrayLike:
    """k'' = d^2k/domega^2 (s^2/m) by central second difference."""
    omega = 2 * np.pi * SPEED_OF_LIGHT / np.asarray(wavelength, dtype=float)
    k0 = wavevector(omega, polarization, theta)
    k_plus = wavevector(omega + step, polarization, theta)
    k_minus = wavevector(omega - step, polarization, theta)
    return (k_plus - 2 * k0 + k_minus) / step ** 2


def group_delay_difference(wavelength: float, crystal_length: float,
                           theta: float = SPLITTER_AXIS_ANGLE) -> float:
    """
    Delay between the o and e replicas of a pulse after a birefringent plate.

    tau = L * |1/v_g,o - 1/v_g,e(theta)|

    Args:
        wavelength: Pulse central wavelength in metres
        crystal_length: Plate length in metres
        theta: Angle between the e wavevector and the optic axis
               (calibrated default, see config.constants)

    Returns:
        Delay in seconds
    """
    if crystal_length < 0:
        raise DomainError(f"splitter length must be >= 0, got {crystal_length}")
    _check_window(wavelength)
    omega = 2 * np.pi * SPEED_OF_LIGHT / wavelength
    per_metre = abs(float(inverse_group_velocity(omega, ORDINARY))
                    - float(inverse_group_velocity(omega, EXTRAORDINARY, theta)))
    return crystal_length * per_metre
