"""
TPSA Grid Engine
================
Builds the two-photon spectral amplitude F(Ws, Wi) on a uniform frequency
grid and transforms it: fibre GVD phase, Gaussian bandpass filters, rotation
to the (W+, W-) frame, exact 2D Fourier transform to the two-photon time
amplitude and the far-field frequency-to-time scaling law.

Array convention: values[j, k] = F(axis[j], axis[k]) with the signal
detuning along axis 0 and the idler detuning along axis 1. In the rotated
frame axis 0 carries W+ = (Wi + Ws)/sqrt(2) and axis 1 W- = (Wi - Ws)/sqrt(2).
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import fft as sfft
from scipy.ndimage import map_coordinates

from config.constants import DEFAULT_GRID_POINTS, DEFAULT_OMEGA_MAX, SPEED_OF_LIGHT
from .dispersion import CrystalSpec, FiberSpec, group_index, phase_mismatch
from .errors import ConfigurationError, DomainError
from .pump import FWHM_TO_SIGMA, PumpSpec, bandwidth_to_fwhm, pump_amplitude

logger = logging.getLogger(__name__)

SIGNAL = "signal"
IDLER = "idler"
CHANNELS = (SIGNAL, IDLER)

SIGNAL_IDLER_FRAME = "signal_idler"
PM_FRAME = "pm"

# sinc^2(x) falls to one half at |x| = 1.3916
SINC2_HALF_WIDTH = 1.3915573

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class FrequencyGrid:
    """
    Symmetric uniform grid shared by both frequency axes.

    Args:
        n: Points per axis (power of two, >= 64)
        omega_max: Half-span in rad/s; the axis runs over [-omega_max, omega_max]
    """
    n: int = DEFAULT_GRID_POINTS
    omega_max: float = DEFAULT_OMEGA_MAX

    def __post_init__(self):
        if self.n < 64 or self.n & (self.n - 1):
            raise ConfigurationError(f"grid size must be a power of two >= 64, got {self.n}")
        if not self.omega_max > 0:
            raise ConfigurationError(f"grid half-span must be > 0, got {self.omega_max}")

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.omega_max, self.omega_max, self.n)

    @property
    def step(self) -> float:
        return 2 * self.omega_max / (self.n - 1)

    @property
    def span(self) -> float:
        return 2 * self.omega_max

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    def time_axis(self) -> np.ndarray:
        """Centred dual axis t = 2*pi*m/(N*dW), m = -N/2 .. N/2-1."""
        return (np.arange(self.n) - self.n // 2) * (2 * np.pi / (self.n * self.step))

    def dual_frequency_axis(self) -> np.ndarray:
        """Centred axis with the grid step that contains W = 0."""
        return (np.arange(self.n) - self.n // 2) * self.step

    def validate_coverage(self, pump: PumpSpec, crystal: CrystalSpec):
        """
        Require the span to cover 4x the larger of the pump and phase-matching bandwidths.

        Raises:
            ConfigurationError: span too small
        """
        pump_fwhm = bandwidth_to_fwhm(pump.bandwidth, pump.wavelength)
        pm_fwhm = phase_matching_bandwidth(crystal)
        required = 4 * max(pump_fwhm, pm_fwhm)
        if self.span < required:
            raise ConfigurationError(
                f"grid span {self.span:.3e} rad/s below required {required:.3e} rad/s "
                f"(4x max(pump {pump_fwhm:.3e}, phase matching {pm_fwhm:.3e}))"
            )


@dataclass
class TpsaGrid:
    """
    Sampled two-photon spectral amplitude.

    Args:
        grid: Frequency grid of both axes
        values: Complex N x N array
        normalized: True when sum |F|^2 dW^2 = 1
        frame: "signal_idler" or "pm" (rotated W+/W- frame)
        chirp: Accumulated fibre phase coefficient k''*l (s^2) applied to values
    """
    grid: FrequencyGrid
    values: np.ndarray
    normalized: bool = False
    frame: str = SIGNAL_IDLER_FRAME
    chirp: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n, self.grid.n):
            raise ConfigurationError(
                f"values shape {self.values.shape} does not match grid {self.grid.n}"
            )
        if not np.all(np.isfinite(self.values)):
            raise DomainError("TPSA contains non-finite entries")

    @classmethod
    def from_function(cls, grid: FrequencyGrid,
                      func: Callable[[np.ndarray, np.ndarray], np.ndarray],
                      normalize: bool = True) -> "TpsaGrid":
        s, i = grid.mesh()
        tpsa = cls(grid=grid, values=func(s, i))
        return tpsa.normalize() if normalize else tpsa

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        return float(np.sum(self.intensity) * self.grid.step ** 2)

    def normalize(self) -> "TpsaGrid":
        total = self.norm()
        if total <= 0:
            raise DomainError("cannot normalize an all-zero TPSA")
        return replace(self, values=self.values / np.sqrt(total), normalized=True)

    def source_values(self) -> np.ndarray:
        """Values with the recorded fibre phase removed."""
        if self.chirp == 0:
            return self.values
        s, i = self.grid.mesh()
        return self.values * np.exp(-0.5j * self.chirp * (s ** 2 + i ** 2))


@dataclass
class TptaGrid:
    """
    Sampled two-photon time amplitude F(ts, ti).

    Args:
        time_axis: Uniform time axis shared by both axes (s)
        values: Complex N x N array, values[j, k] = F(ts[j], ti[k])
        frequency_grid: Grid of the TPSA this amplitude was computed from
    """
    time_axis: np.ndarray
    values: np.ndarray
    frequency_grid: Optional[FrequencyGrid] = None
    peak_normalized: bool = False
    description: str = field(default="")

    @property
    def step(self) -> float:
        return float(self.time_axis[1] - self.time_axis[0])

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        return float(np.sum(self.intensity) * self.step ** 2)


def phase_matching_bandwidth(crystal: CrystalSpec) -> float:
    """
    FWHM (rad/s) of |sinc(dk L/2)|^2 along the narrower of the two detuning axes.

    Uses the linearised mismatch dk ~ (k_p' - k_j') * W_j.
    """
    theta = crystal.resolved_angle()
    n_p = group_index(crystal.pump_wavelength, "extraordinary", theta)
    n_s = group_index(2 * crystal.pump_wavelength, "ordinary")
    n_i = group_index(2 * crystal.pump_wavelength, "extraordinary", theta)
    slope = max(abs(n_p - n_s), abs(n_p - n_i)) / SPEED_OF_LIGHT
    return 4 * SINC2_HALF_WIDTH / (crystal.length * slope)


def build_tpsa(grid: FrequencyGrid, pump: PumpSpec, crystal: CrystalSpec,
               theta: Optional[float] = None, include_phase: bool = False,
               validate: bool = True) -> TpsaGrid:
    """
    F(Ws, Wi) = pump(Ws + Wi) * sinc(dk(Ws, Wi) L / 2), normalized.

    Args:
        grid: Frequency grid
        pump: Pump spectrum
        crystal: Crystal parameters
        theta: Cut-angle override; defaults to the crystal's resolved angle
        include_phase: Multiply by exp(i dk L / 2)
        validate: Check the grid span against the pump and phase-matching bandwidths

    Returns:
        Normalized TpsaGrid
    """
    if validate:
        grid.validate_coverage(pump, crystal)
    if theta is None:
        theta = crystal.resolved_angle()
    s, i = grid.mesh()
    half_phase = phase_mismatch(s, i, crystal, theta=theta) * crystal.length / 2
    # np.sinc(x) = sin(pi x)/(pi x), exactly 1 at 0
    pm = np.sinc(half_phase / np.pi).astype(complex)
    if include_phase:
        pm *= np.exp(1j * half_phase)
    values = pump_amplitude(s + i, pump) * pm
    logger.info("built TPSA on %dx%d grid, theta=%.3f deg", grid.n, grid.n, np.degrees(theta))
    return TpsaGrid(grid=grid, values=values).normalize()


def apply_fiber(tpsa: TpsaGrid, fiber: FiberSpec) -> TpsaGrid:
    """Multiply by exp(i l k'' (Ws^2 + Wi^2)/2); the form is rotation invariant."""
    beta = fiber.scale
    if beta == 0:
        return replace(tpsa, values=tpsa.values.copy())
    s, i = tpsa.grid.mesh()
    values = tpsa.values * np.exp(0.5j * beta * (s ** 2 + i ** 2))
    return replace(tpsa, values=values, chirp=tpsa.chirp + beta)


def _dft_axis(values: np.ndarray, x: np.ndarray, y: np.ndarray, sign: int, axis: int) -> np.ndarray:
    """
    (dx / sqrt(2 pi)) * sum_k f(x_k) exp(sign * i * x_k * y_m) along one axis.

    Both axes are uniform with dx * dy = 2 pi / N and arbitrary offsets.
    """
    n = len(x)
    dx = x[1] - x[0]
    dy = y[1] - y[0]
    if not np.isclose(dx * dy * n, 2 * np.pi, rtol=1e-9):
        raise DomainError("axes are not Fourier duals")
    k = np.arange(n)
    shape = [1] * values.ndim
    shape[axis] = n
    g = values * np.exp(sign * 1j * k * dx * y[0]).reshape(shape)
    core = n * sfft.ifft(g, axis=axis) if sign > 0 else sfft.fft(g, axis=axis)
    return core * (np.exp(sign * 1j * x[0] * y) * dx / np.sqrt(2 * np.pi)).reshape(shape)


def _transform_2d(values: np.ndarray, x: np.ndarray, y: np.ndarray, sign: int) -> np.ndarray:
    return _dft_axis(_dft_axis(values, x, y, sign, 0), x, y, sign, 1)


def tpta_exact(tpsa: TpsaGrid) -> TptaGrid:
    """
    Two-photon time amplitude by 2D Fourier transform with the exp(-i W t) sign.

    With this sign the fibre phase exp(+i b W^2/2) sends frequency W to the
    arrival time t = +b W, the mapping used by the far-field law and the
    delay distributions.

    For a fibre-propagated TPSA (chirp = b = k''l != 0) the transform is evaluated
    per axis through the Fresnel factorisation
        F(t) = exp(i pi/4)/sqrt(b) * exp(-i t^2/(2b)) * T+[F~(tau) exp(-i tau^2/(2b))](t/b),
    where F~ is the exp(-i W t) transform of the source amplitude and T+ the
    exp(+i u tau) transform. This is exact and needs
    no sampling of the fibre chirp; the time axis becomes t = b * u on the
    dual frequency grid.
    """
    if tpsa.frame != SIGNAL_IDLER_FRAME:
        raise DomainError("time amplitude requires the signal/idler frame")
    grid = tpsa.grid
    omega = grid.axis
    tau = grid.time_axis()
    beta = tpsa.chirp
    if beta == 0:
        values = _transform_2d(tpsa.values, omega, tau, -1)
        return TptaGrid(time_axis=tau, values=values, frequency_grid=grid,
                        description="exact")

    source_time = _transform_2d(tpsa.source_values(), omega, tau, -1)
    ts, ti = np.meshgrid(tau, tau, indexing="ij")
    q = source_time * np.exp(-0.5j * (ts ** 2 + ti ** 2) / beta)
    u = grid.dual_frequency_axis()
    transformed = _transform_2d(q, tau, u, +1)
    us, ui = np.meshgrid(u, u, indexing="ij")
    factor = np.exp(0.5j * np.pi * np.sign(beta)) / abs(beta)
    values = factor * np.exp(-0.5j * beta * (us ** 2 + ui ** 2)) * transformed
    time_axis = beta * u
    if beta < 0:
        time_axis = time_axis[::-1]
        values = values[::-1, ::-1]
    logger.debug("exact transform through fibre, k''l=%.3e s^2", beta)
    return TptaGrid(time_axis=time_axis, values=values, frequency_grid=grid,
                    description="exact_fiber")


def tpsa_from_tpta(tpta: TptaGrid) -> TpsaGrid:
    """Inverse of tpta_exact for an unpropagated time amplitude."""
    if tpta.frequency_grid is None or tpta.description != "exact":
        raise DomainError("inverse transform needs an unpropagated exact time amplitude")
    grid = tpta.frequency_grid
    t = tpta.time_axis
    omega = grid.axis
    values = _transform_2d(tpta.values, t, omega, +1)
    return TpsaGrid(grid=grid, values=values)


def tpta_far_field(tpsa: TpsaGrid, fiber: FiberSpec,
                   time_axis: Optional[np.ndarray] = None) -> TptaGrid:
    """
    Far-field time amplitude F(ts, ti) ~ F(Ws = ts/k''l, Wi = ti/k''l), peak-normalized.

    Args:
        tpsa: Source TPSA (a recorded fibre chirp is removed first)
        fiber: Fibre with l > 0
        time_axis: Output axis; defaults to k''l times the dual frequency axis,
                   which is the axis tpta_exact produces after the fibre

    Raises:
        DomainError: zero fibre length
    """
    beta = fiber.scale
    if beta == 0:
        raise DomainError("far-field undefined for zero fibre length")
    if tpsa.frame != SIGNAL_IDLER_FRAME:
        raise DomainError("far-field mapping requires the signal/idler frame")
    grid = tpsa.grid
    if time_axis is None:
        time_axis = beta * grid.dual_frequency_axis()
        if beta < 0:
            time_axis = time_axis[::-1]
    far_field_validity(tpsa, fiber)
    source = tpsa.source_values()
    # t = +k''l * W on both axes; cubic spline, zero outside the grid
    index = (np.asarray(time_axis, dtype=float) / beta - grid.axis[0]) / grid.step
    js, ji = np.meshgrid(index, index, indexing="ij")
    coords = np.stack([js, ji])
    real = map_coordinates(source.real, coords, order=3, mode="constant", cval=0.0)
    imag = map_coordinates(source.imag, coords, order=3, mode="constant", cval=0.0)
    values = real + 1j * imag
    peak = np.max(np.abs(values))
    if peak > 0:
        values = values / peak
    return TptaGrid(time_axis=np.asarray(time_axis, dtype=float), values=values,
                    frequency_grid=grid, peak_normalized=True, description="far_field")


def far_field_discrepancy(tpsa: TpsaGrid, fiber: FiberSpec) -> float:
    """
    Normalized L2 distance between peak-normalized |exact| and |far-field| amplitudes.

    The exact amplitude is computed through the fibre from the source TPSA.
    """
    source = replace(tpsa, values=tpsa.source_values(), chirp=0.0)
    exact = np.abs(tpta_exact(apply_fiber(source, fiber)).values)
    far = np.abs(tpta_far_field(source, fiber).values)
    exact /= exact.max()
    far /= far.max()
    return float(np.linalg.norm(exact - far) / np.linalg.norm(far))


def principal_widths(tpsa: TpsaGrid) -> Tuple[float, float]:
    """Intensity FWHM along the narrow and wide principal axes of |F|^2 (Gaussian equivalent)."""
    s, i = tpsa.grid.mesh()
    w = tpsa.intensity
    total = w.sum()
    if total <= 0:
        raise DomainError("all-zero TPSA has no principal widths")
    ms, mi = (w * s).sum() / total, (w * i).sum() / total
    css = (w * (s - ms) ** 2).sum() / total
    cii = (w * (i - mi) ** 2).sum() / total
    csi = (w * (s - ms) * (i - mi)).sum() / total
    eig = np.linalg.eigvalsh(np.array([[css, csi], [csi, cii]]))
    narrow, wide = np.sqrt(np.clip(eig, 0, None)) / FWHM_TO_SIGMA
    return float(narrow), float(wide)


def far_field_validity(tpsa: TpsaGrid, fiber: FiberSpec) -> bool:
    """
    Heuristic far-field check k''l >= 10 / dW_feature^2.

    dW_feature is the FWHM along the narrowest principal axis of |F|^2.
    Logs a warning and returns False when violated.
    """
    feature, _ = principal_widths(tpsa)
    threshold = 10.0 / feature ** 2 if feature > 0 else np.inf
    if abs(fiber.scale) < threshold:
        logger.warning("fibre k''l=%.3e s^2 below far-field threshold %.3e s^2",
                       fiber.scale, threshold)
        return False
    return True


def marginal(tpsa: TpsaGrid, axis: int) -> np.ndarray:
    """Integral of |F|^2 over the other axis (density along `axis`)."""
    return tpsa.intensity.sum(axis=1 - axis) * tpsa.grid.step


@dataclass(frozen=True)
class FilterSpec:
    """
    Gaussian bandpass filter in front of one detector.

    Args:
        channel: "signal" or "idler"
        center: Centre detuning (rad/s)
        bandwidth: Intensity FWHM (rad/s); inf means no filter
    """
    channel: str
    center: float = 0.0
    bandwidth: float = np.inf

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise ConfigurationError(f"filter channel must be one of {CHANNELS}, got '{self.channel}'")
        if not self.bandwidth > 0:
            raise ConfigurationError(f"filter bandwidth must be > 0, got {self.bandwidth}")

    @classmethod
    def from_wavelength(cls, channel: str, bandwidth: float, center_wavelength: float,
                        center: float = 0.0) -> "FilterSpec":
        """Filter with an intensity-FWHM bandwidth given in wavelength (m)."""
        return cls(channel=channel, center=center,
                   bandwidth=bandwidth_to_fwhm(bandwidth, center_wavelength))

    def transmission(self, omega: np.ndarray) -> np.ndarray:
        """Amplitude transmission; its square has intensity FWHM = bandwidth."""
        if np.isinf(self.bandwidth):
            return np.ones_like(omega, dtype=float)
        sigma = self.bandwidth * FWHM_TO_SIGMA
        return np.exp(-(omega - self.center) ** 2 / (4 * sigma ** 2))


def apply_filter(tpsa: TpsaGrid, filt: FilterSpec, renormalize: bool = False) -> TpsaGrid:
    """Multiply F along the filter's channel axis by the Gaussian amplitude transmission."""
    if tpsa.frame != SIGNAL_IDLER_FRAME:
        raise DomainError("filters act on the signal/idler frame")
    if np.isinf(filt.bandwidth):
        return replace(tpsa, values=tpsa.values.copy())
    t = filt.transmission(tpsa.grid.axis)
    if filt.channel == SIGNAL:
        values = tpsa.values * t[:, None]
    else:
        values = tpsa.values * t[None, :]
    out = replace(tpsa, values=values, normalized=False)
    return out.normalize() if renormalize else out


def rotate_to_pm(tpsa: TpsaGrid) -> TpsaGrid:
    """
    Bilinear resampling onto (W+, W-) = ((Wi + Ws)/sqrt2, (Wi - Ws)/sqrt2).

    Points that fall outside the source grid are zero.
    """
    grid = tpsa.grid
    plus, minus = grid.mesh()
    omega_s = (plus - minus) / SQRT2
    omega_i = (plus + minus) / SQRT2
    coords = np.stack([(omega_s - grid.axis[0]) / grid.step,
                       (omega_i - grid.axis[0]) / grid.step])
    real = map_coordinates(tpsa.values.real, coords, order=1, mode="constant", cval=0.0)
    imag = map_coordinates(tpsa.values.imag, coords, order=1, mode="constant", cval=0.0)
    return replace(tpsa, values=real + 1j * imag, frame=PM_FRAME)
