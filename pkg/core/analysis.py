"""
Analysis
========
Physical quantities extracted from delay distributions: TPSA tilt alpha,
degree of frequency entanglement R and interference-fringe diagnostics.

Widths follow the delay convention t_s - t_i = k''l (Ws - Wi):
    unfiltered          -> dW   (width in Ws - Wi)
    signal filter (ii)  -> dWi
    idler filter (iii)  -> dWs
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.signal import find_peaks

from config.constants import FRINGE_PEAK_THRESHOLD, FRINGE_VALLEY_RATIO
from .errors import ComparisonError, DomainError
from .measurement import DelayDistribution, measure_width

logger = logging.getLogger(__name__)

MIN_FRINGE_BINS = 64


@dataclass(frozen=True)
class FringeResult:
    detected: bool
    period: float = float("nan")
    visibility: float = 0.0
    n_peaks: int = 0


@dataclass
class AnalysisReport:
    """
    Extracted widths (rad/s), tilt (rad), entanglement degree and fringe diagnostics.
    """
    delta_omega: float
    delta_omega_s: float
    delta_omega_i: float
    alpha: float
    r_from_s: float
    r_from_i: float
    fringe: FringeResult = field(default_factory=lambda: FringeResult(detected=False))
    deconvolved: bool = False
    multimodal: bool = False

    def __post_init__(self):
        for name in ("delta_omega", "delta_omega_s", "delta_omega_i"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0")
        if not 0 < self.alpha < np.pi / 2:
            raise DomainError(f"tilt must lie in (0, pi/2), got {self.alpha}")

    @property
    def alpha_degrees(self) -> float:
        return float(np.degrees(self.alpha))

    @property
    def filter_limited(self) -> bool:
        return min(self.r_from_s, self.r_from_i) < 1

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        fringe = data.pop("fringe")
        data["alpha_deg"] = self.alpha_degrees
        data["filter_limited"] = self.filter_limited
        data["consistency"] = consistency_check(self)
        data.update({f"fringe_{k}": v for k, v in fringe.items()})
        return data


def tilt_from_widths(delta_omega_s: float, delta_omega_i: float) -> float:
    """
    TPSA tilt: tan(alpha) = dWs / dWi.

    Raises:
        DomainError: nonpositive width
    """
    if not (delta_omega_s > 0 and delta_omega_i > 0):
        raise DomainError(f"widths must be > 0, got {delta_omega_s}, {delta_omega_i}")
    return float(np.arctan(delta_omega_s / delta_omega_i))


def entanglement_R(delta_omega: float, delta_omega_s: float, delta_omega_i: float,
                   alpha: float) -> Tuple[float, float]:
    """
    Degree of frequency entanglement from both filtered widths.

    R_s = (dW/dWs) / (1 + cot alpha),  R_i = (dW/dWi) / (1 + tan alpha)
    """
    if not (delta_omega > 0 and delta_omega_s > 0 and delta_omega_i > 0):
        raise DomainError("widths must be > 0")
    if not 0 < alpha < np.pi / 2:
        raise DomainError(f"tilt must lie in (0, pi/2), got {alpha}")
    tan_a = np.tan(alpha)
    r_s = delta_omega / delta_omega_s / (1 + 1 / tan_a)
    r_i = delta_omega / delta_omega_i / (1 + tan_a)
    return float(r_s), float(r_i)


def consistency_check(report: AnalysisReport) -> float:
    """Relative difference |R_s - R_i| / max(R_s, R_i)."""
    top = max(report.r_from_s, report.r_from_i)
    if top == 0:
        return 0.0
    return abs(report.r_from_s - report.r_from_i) / top


def deconvolve_width(width: float, psf_fwhm: float) -> float:
    """Gaussian quadrature deconvolution sqrt(w^2 - p^2), floored at zero."""
    return float(np.sqrt(max(width ** 2 - psf_fwhm ** 2, 0.0)))


def fringe_detect(dist: DelayDistribution, peak_threshold: float = FRINGE_PEAK_THRESHOLD,
                  valley_ratio: float = FRINGE_VALLEY_RATIO) -> FringeResult:
    """
    Detect interference fringes in a delay distribution.

    Fringes are >= 2 interior maxima above `peak_threshold` of the global peak
    whose separating minimum drops below `valley_ratio` of the lesser peak.
    Shallower neighbours are merged into the higher one.
    """
    y = dist.density
    if len(y) < MIN_FRINGE_BINS:
        logger.warning("fringe detection needs >= %d bins, got %d", MIN_FRINGE_BINS, len(y))
        return FringeResult(detected=False)
    top = y.max()
    if top <= 0:
        return FringeResult(detected=False)
    candidates, _ = find_peaks(y, height=peak_threshold * top)
    kept = []
    for p in candidates:
        if not kept:
            kept.append(p)
            continue
        q = kept[-1]
        valley = y[q:p + 1].min()
        if valley < valley_ratio * min(y[p], y[q]):
            kept.append(p)
        elif y[p] > y[q]:
            kept[-1] = p
    if len(kept) < 2:
        return FringeResult(detected=False, n_peaks=len(kept))

    kept = np.asarray(kept)
    positions = dist.axis[kept]
    period = float(np.mean(np.diff(positions)))
    centroid = float(np.sum(dist.axis * y) / np.sum(y))
    midpoints = 0.5 * (positions[:-1] + positions[1:])
    c = int(np.argmin(np.abs(midpoints - centroid)))
    a, b = kept[c], kept[c + 1]
    v_max = max(y[a], y[b])
    v_min = y[a:b + 1].min()
    visibility = float((v_max - v_min) / (v_max + v_min))
    return FringeResult(detected=True, period=period, visibility=visibility, n_peaks=len(kept))


def analyze(unfiltered: DelayDistribution, signal_filtered: DelayDistribution,
            idler_filtered: DelayDistribution, psf_fwhm: Optional[float] = None,
            deconvolve: bool = False, peak_threshold: float = FRINGE_PEAK_THRESHOLD,
            valley_ratio: float = FRINGE_VALLEY_RATIO) -> AnalysisReport:
    """
    Tilt, entanglement degree and fringe diagnostics from the three measurement cases.

    Args:
        unfiltered: Case (i), no filters
        signal_filtered: Case (ii), filter in the signal channel (gives dWi)
        idler_filtered: Case (iii), filter in the idler channel (gives dWs)
        psf_fwhm: Instrument FWHM (s), required for deconvolution
        deconvolve: Remove the PSF from each width in quadrature before use
        peak_threshold, valley_ratio: Fringe-detection heuristics

    Returns:
        AnalysisReport with widths converted to rad/s via k''l
    """
    widths = []
    multimodal = False
    for dist in (unfiltered, signal_filtered, idler_filtered):
        measured = measure_width(dist)
        multimodal = multimodal or measured.multimodal
        width = measured.width
        if deconvolve:
            if psf_fwhm is None:
                raise DomainError("deconvolution needs the PSF FWHM")
            width = deconvolve_width(width, psf_fwhm)
        widths.append(dist.to_frequency(width))
    delta_omega, delta_omega_i, delta_omega_s = widths

    alpha = tilt_from_widths(delta_omega_s, delta_omega_i)
    r_s, r_i = entanglement_R(delta_omega, delta_omega_s, delta_omega_i, alpha)
    report = AnalysisReport(
        delta_omega=delta_omega,
        delta_omega_s=delta_omega_s,
        delta_omega_i=delta_omega_i,
        alpha=alpha,
        r_from_s=r_s,
        r_from_i=r_i,
        fringe=fringe_detect(unfiltered, peak_threshold, valley_ratio),
        deconvolved=deconvolve,
        multimodal=multimodal,
    )
    if report.filter_limited:
        logger.warning("R = %.3f below 1: result is filter-limited", min(r_s, r_i))
    logger.info("alpha=%.2f deg, R=%.3f", report.alpha_degrees, r_s)
    return report


def report_to_text(report: AnalysisReport) -> str:
    """Serialize as `key: value` lines."""
    lines = []
    for key, value in report.to_dict().items():
        if isinstance(value, float):
            lines.append(f"{key}: {value:.6g}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def print_report(report: AnalysisReport, title: str = "TPSA ANALYSIS REPORT"):
    """Print a detailed analysis report."""
    print("\n" + "=" * 60)
    print(title)
    print("=" * 60)

    print("\n📏 WIDTHS")
    print(f"Unfiltered dW:          {report.delta_omega:.4e} rad/s")
    print(f"Idler-filter dWs:       {report.delta_omega_s:.4e} rad/s")
    print(f"Signal-filter dWi:      {report.delta_omega_i:.4e} rad/s")
    print(f"PSF deconvolved:        {report.deconvolved}")

    print("\n📐 TILT & ENTANGLEMENT")
    print(f"Tilt alpha:             {report.alpha_degrees:.2f} deg")
    print(f"R (from dWs):           {report.r_from_s:.3f}")
    print(f"R (from dWi):           {report.r_from_i:.3f}")
    if report.filter_limited:
        print("⚠️  R < 1: filter-limited")

    print("\n〰️  FRINGES")
    print(f"Detected:               {report.fringe.detected}")
    if report.fringe.detected:
        print(f"Peaks:                  {report.fringe.n_peaks}")
        print(f"Period:                 {report.fringe.period:.4e} s")
        print(f"Visibility:             {report.fringe.visibility:.3f}")

    print("\n" + "=" * 60 + "\n")


@dataclass(frozen=True)
class ComparisonResult:
    max_deviation: float
    l2_deviation: float
    tolerance: float
    n_points: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def compare_distributions(reference: DelayDistribution, produced: DelayDistribution,
                          tolerance: float) -> ComparisonResult:
    """
    Compare two peak-normalized distributions on the reference axis.

    The produced curve is linearly resampled onto the reference bins inside
    the overlap of both axes. Deviations are absolute in units of the peak
    (max) and relative to the reference norm (L2).

    Raises:
        ComparisonError: overlap shorter than two reference bins
        DomainError: negative tolerance or all-zero curve
    """
    if tolerance < 0:
        raise DomainError(f"tolerance must be >= 0, got {tolerance}")
    ref = reference.peak_normalized()
    out = produced.peak_normalized()
    lo = max(ref.axis[0], out.axis[0])
    hi = min(ref.axis[-1], out.axis[-1])
    mask = (ref.axis >= lo) & (ref.axis <= hi)
    if mask.sum() < 2:
        raise ComparisonError("distributions have disjoint delay axes")
    axis = ref.axis[mask]
    a = ref.density[mask]
    b = np.interp(axis, out.axis, out.density)
    diff = a - b
    l2 = float(np.linalg.norm(diff) / np.linalg.norm(a)) if np.any(a) else float(np.linalg.norm(diff))
    result = ComparisonResult(max_deviation=float(np.max(np.abs(diff))), l2_deviation=l2,
                              tolerance=float(tolerance), n_points=int(mask.sum()))
    logger.info("compare: max %.3e, L2 %.3e over %d bins", result.max_deviation,
                result.l2_deviation, result.n_points)
    return result
