"""
Measurement Model
=================
What the START-STOP experiment records: the signal-idler delay distribution
(projection of |F|^2 onto the W- axis, scaled by k''l), cross-sections for
ideal narrowband filters, instrument point-spread-function convolution and
Monte-Carlo coincidence histograms emulating the TAC/MCA chain.

Delay convention: the reported axis is t_s - t_i = k''l (Ws - Wi), which is
-sqrt(2) k''l W-; the sqrt(2) stays inside the rotated frame.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.ndimage import map_coordinates
from scipy.signal import fftconvolve

from config.constants import EXPERIMENT_PSF_FWHM
from .dispersion import FiberSpec
from .errors import ConfigurationError, DomainError
from .pump import FWHM_TO_SIGMA
from .tpsa import (
    IDLER,
    PM_FRAME,
    SIGNAL,
    SQRT2,
    FilterSpec,
    FrequencyGrid,
    TpsaGrid,
    apply_filter,
)

logger = logging.getLogger(__name__)

NONE = "none"
PEAK = "peak"
AREA = "area"


@dataclass
class DelayDistribution:
    """
    Density over the signal-idler delay.

    Args:
        axis: Uniform, strictly increasing delay axis (s)
        density: Nonnegative values
        normalization: "none", "peak" or "area"
        scale: k''l (s^2) relating delay to (Ws - Wi); None when unknown
        label: Short name used in exports and plots
    """
    axis: np.ndarray
    density: np.ndarray
    normalization: str = NONE
    scale: Optional[float] = None
    label: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.axis = np.asarray(self.axis, dtype=float)
        self.density = np.asarray(self.density, dtype=float)
        if self.axis.ndim != 1 or self.axis.shape != self.density.shape:
            raise ConfigurationError("delay axis and density must be 1D arrays of equal length")
        if len(self.axis) < 2:
            raise ConfigurationError("delay distribution needs at least two bins")
        steps = np.diff(self.axis)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-6, atol=0):
            raise ConfigurationError("delay axis must be uniform and strictly increasing")
        if np.any(self.density < 0):
            raise DomainError("delay density must be nonnegative")

    @property
    def step(self) -> float:
        return float(self.axis[1] - self.axis[0])

    @property
    def span(self) -> float:
        return float(self.axis[-1] - self.axis[0])

    def area(self) -> float:
        return float(np.sum(self.density) * self.step)

    def _with(self, density: np.ndarray, normalization: str) -> "DelayDistribution":
        return DelayDistribution(axis=self.axis, density=density, normalization=normalization,
                                 scale=self.scale, label=self.label, metadata=dict(self.metadata))

    def peak_normalized(self) -> "DelayDistribution":
        peak = self.density.max()
        if peak <= 0:
            raise DomainError("cannot normalize an all-zero distribution")
        return self._with(self.density / peak, PEAK)

    def area_normalized(self) -> "DelayDistribution":
        area = self.area()
        if area <= 0:
            raise DomainError("cannot normalize an all-zero distribution")
        return self._with(self.density / area, AREA)

    def to_frequency(self, width: float) -> float:
        """Convert a delay width to (Ws - Wi) units (rad/s)."""
        if not self.scale:
            raise DomainError("distribution has no k''l scale")
        return width / abs(self.scale)


@dataclass(frozen=True)
class PsfSpec:
    """
    Instrument response on the delay axis: Gaussian FWHM or a tabulated curve.

    Args:
        fwhm: Gaussian FWHM (s), used when no table is given
        axis: Tabulated delay axis (s)
        values: Tabulated response
    """
    fwhm: Optional[float] = EXPERIMENT_PSF_FWHM
    axis: Optional[tuple] = None
    values: Optional[tuple] = None

    def __post_init__(self):
        if self.axis is None:
            if self.fwhm is None or not self.fwhm > 0:
                raise ConfigurationError(f"PSF FWHM must be > 0, got {self.fwhm}")
        else:
            if self.values is None or len(self.values) != len(self.axis):
                raise ConfigurationError("tabulated PSF needs axis and values of equal length")
            if np.any(np.asarray(self.values) < 0):
                raise ConfigurationError("tabulated PSF must be nonnegative")

    @classmethod
    def tabulated(cls, axis: np.ndarray, values: np.ndarray) -> "PsfSpec":
        return cls(fwhm=None, axis=tuple(np.asarray(axis, dtype=float)),
                   values=tuple(np.asarray(values, dtype=float)))

    @property
    def is_tabulated(self) -> bool:
        return self.axis is not None

    def width(self) -> float:
        if not self.is_tabulated:
            return self.fwhm
        return fwhm(DelayDistribution(axis=np.array(self.axis), density=np.array(self.values)))

    def kernel(self, step: float) -> np.ndarray:
        """Unit-area kernel sampled with `step` on a symmetric, odd-length axis."""
        if self.is_tabulated:
            table_axis = np.asarray(self.axis)
            half = int(np.ceil(np.max(np.abs(table_axis)) / step))
            grid = np.arange(-half, half + 1) * step
            kernel = np.interp(grid, table_axis, np.asarray(self.values), left=0.0, right=0.0)
        else:
            sigma = self.fwhm * FWHM_TO_SIGMA
            half = max(int(np.ceil(5 * sigma / step)), 1)
            grid = np.arange(-half, half + 1) * step
            kernel = np.exp(-grid ** 2 / (2 * sigma ** 2))
        total = kernel.sum() * step
        if total <= 0:
            raise ConfigurationError("PSF kernel has zero area on this delay step")
        return kernel / total


@dataclass
class CoincidenceHistogram:
    """Integer coincidence counts per delay bin."""
    edges: np.ndarray
    counts: np.ndarray
    total: int
    seed: Optional[int] = None

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


def _rotate_intensity(intensity: np.ndarray, grid: FrequencyGrid) -> np.ndarray:
    plus, minus = grid.mesh()
    coords = np.stack([((plus - minus) / SQRT2 - grid.axis[0]) / grid.step,
                       ((plus + minus) / SQRT2 - grid.axis[0]) / grid.step])
    return map_coordinates(intensity, coords, order=1, mode="constant", cval=0.0)


def _require_fiber(fiber: FiberSpec) -> float:
    beta = fiber.scale
    if beta == 0:
        raise DomainError("far-field undefined for zero fibre length")
    return beta


def _ascending(axis: np.ndarray, density: np.ndarray):
    if axis[0] > axis[-1]:
        return axis[::-1], density[::-1]
    return axis, density


def delay_projection(tpsa: TpsaGrid, fiber: FiberSpec, label: str = "unfiltered") -> DelayDistribution:
    """
    Delay distribution integral dW+ |F(W+, W-)|^2 mapped to t_s - t_i.

    |F|^2 is rotated, so any fibre phase carried by the TPSA cancels.

    Raises:
        DomainError: zero fibre length
    """
    beta = _require_fiber(fiber)
    grid = tpsa.grid
    if tpsa.frame == PM_FRAME:
        rotated = tpsa.intensity
    else:
        rotated = _rotate_intensity(tpsa.intensity, grid)
    over_minus = rotated.sum(axis=0) * grid.step
    # t_s - t_i = -sqrt2 * beta * W-, and the grid axis is symmetric
    axis = SQRT2 * beta * grid.axis
    density = over_minus[::-1] / (SQRT2 * abs(beta))
    axis, density = _ascending(axis, density)
    return DelayDistribution(axis=axis, density=np.clip(density, 0, None), scale=beta, label=label)


def cross_section_projection(tpsa: TpsaGrid, fiber: FiberSpec, channel: str,
                             detuning: float = 0.0) -> DelayDistribution:
    """
    Delay distribution behind an infinitely narrow filter.

    A signal filter at Ws0 leaves |F(Ws0, Wi)|^2 on t = k''l (Ws0 - Wi);
    an idler filter at Wi0 leaves |F(Ws, Wi0)|^2 on t = k''l (Ws - Wi0).
    """
    beta = _require_fiber(fiber)
    if tpsa.frame == PM_FRAME:
        raise DomainError("cross-sections are taken in the signal/idler frame")
    grid = tpsa.grid
    intensity = tpsa.intensity
    pos = (detuning - grid.axis[0]) / grid.step
    if not 0 <= pos <= grid.n - 1:
        raise DomainError(f"filter detuning {detuning:.3e} rad/s outside the grid")
    j = min(int(np.floor(pos)), grid.n - 2)
    frac = pos - j
    if channel == SIGNAL:
        line = (1 - frac) * intensity[j, :] + frac * intensity[j + 1, :]
        axis = beta * (detuning + grid.axis)
        density = line[::-1]
    elif channel == IDLER:
        line = (1 - frac) * intensity[:, j] + frac * intensity[:, j + 1]
        axis = beta * (grid.axis - detuning)
        density = line
    else:
        raise ConfigurationError(f"unknown channel '{channel}'")
    axis, density = _ascending(axis, density / abs(beta))
    return DelayDistribution(axis=axis, density=density, scale=beta,
                             label=f"{channel}_ideal_filter")


def filtered_projection(tpsa: TpsaGrid, fiber: FiberSpec, filt: FilterSpec) -> DelayDistribution:
    """Delay distribution with a Gaussian filter in one channel."""
    return delay_projection(apply_filter(tpsa, filt), fiber, label=f"{filt.channel}_filtered")


def add_background(dist: DelayDistribution, floor: float) -> DelayDistribution:
    """Add a uniform accidental-coincidence floor, given as a fraction of the peak."""
    if floor < 0:
        raise ConfigurationError(f"background floor must be >= 0, got {floor}")
    if floor == 0:
        return dist
    return dist._with(dist.density + floor * dist.density.max(), dist.normalization)


def convolve_psf(dist: DelayDistribution, psf: PsfSpec) -> DelayDistribution:
    """
    Linear convolution with the instrument response, trimmed to the input axis.

    Raises:
        ConfigurationError: distribution span shorter than 3 PSF widths
    """
    width = psf.width()
    if dist.span < 3 * width:
        raise ConfigurationError(
            f"delay span {dist.span:.3e} s shorter than 3x PSF FWHM {width:.3e} s"
        )
    kernel = psf.kernel(dist.step)
    blurred = fftconvolve(dist.density, kernel, mode="same") * dist.step
    out = dist._with(np.clip(blurred, 0, None), dist.normalization)
    out.metadata["psf_fwhm"] = width
    return out


def sample_coincidences(dist: DelayDistribution, n_events: int,
                        seed: Optional[int] = None) -> CoincidenceHistogram:
    """
    Multinomial draw of coincidence events over the delay bins.

    Deterministic for a fixed seed.
    """
    if n_events <= 0:
        raise DomainError(f"number of events must be positive, got {n_events}")
    total = dist.density.sum()
    if total <= 0:
        raise DomainError("cannot sample from an all-zero distribution")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(int(n_events), dist.density / total)
    half = dist.step / 2
    edges = np.append(dist.axis - half, dist.axis[-1] + half)
    logger.debug("sampled %d coincidences (seed=%s)", n_events, seed)
    return CoincidenceHistogram(edges=edges, counts=counts, total=int(n_events), seed=seed)


@dataclass(frozen=True)
class WidthMeasurement:
    width: float
    left: float
    right: float
    multimodal: bool


def measure_width(dist: DelayDistribution) -> WidthMeasurement:
    """
    Full width at half maximum with linear interpolation at the crossings.

    For multimodal distributions the outermost crossings are used and the
    result is flagged.

    Raises:
        DomainError: all-zero distribution
    """
    y = dist.density
    x = dist.axis
    peak = y.max()
    if peak <= 0:
        raise DomainError("FWHM undefined for an all-zero distribution")
    half = peak / 2
    above = np.nonzero(y >= half)[0]
    first, last = above[0], above[-1]
    if first == 0:
        left = x[0]
    else:
        left = x[first - 1] + (half - y[first - 1]) / (y[first] - y[first - 1]) * dist.step
    if last == len(y) - 1:
        right = x[-1]
    else:
        right = x[last] + (y[last] - half) / (y[last] - y[last + 1]) * dist.step
    multimodal = bool(np.any(y[first:last + 1] < half))
    if multimodal:
        logger.warning("distribution '%s' is multimodal; FWHM uses outermost crossings", dist.label)
    return WidthMeasurement(width=float(right - left), left=float(left), right=float(right),
                            multimodal=multimodal)


def fwhm(dist: DelayDistribution) -> float:
    """FWHM in the units of the distribution axis."""
    return measure_width(dist).width
