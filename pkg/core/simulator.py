"""
TPSA Simulator
==============
Scenario orchestration: builds the TPSA of a configured source, runs the
unfiltered and filtered START-STOP measurements through the fibre, applies
the instrument response, samples coincidences, extracts tilt and
entanglement degree, and renders figures and artifact files.
"""

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Dict, List, Optional, Union

import matplotlib.pyplot as plt
import numpy as np

from .analysis import AnalysisReport, FringeResult, analyze, fringe_detect, print_report
from .errors import ConfigurationError
from .measurement import (
    CoincidenceHistogram,
    DelayDistribution,
    add_background,
    convolve_psf,
    cross_section_projection,
    delay_projection,
    filtered_projection,
    sample_coincidences,
)
from .pump import bandwidth_to_fwhm, modulation_period, spectrum_vs_wavelength
from .tpsa import (
    IDLER,
    SIGNAL,
    TpsaGrid,
    build_tpsa,
    far_field_validity,
    phase_matching_bandwidth,
    rotate_to_pm,
)

if TYPE_CHECKING:
    from config.schema import ScenarioConfig

logger = logging.getLogger(__name__)

UNFILTERED = "unfiltered"


class TpsaSimulator:
    """
    Runs one scenario: TPSA -> delay distributions -> analysis -> artifacts.
    """

    def __init__(self, config: "ScenarioConfig"):
        """
        Initialize the simulator.

        Args:
            config: Validated scenario (see config.schema.load_scenario)
        """
        self.config = config
        self.tpsa: Optional[TpsaGrid] = None
        self.theta: Optional[float] = None
        self.distributions: Dict[str, DelayDistribution] = {}
        self.histograms: Dict[str, CoincidenceHistogram] = {}
        self.fringes: Dict[str, FringeResult] = {}
        self.report: Optional[AnalysisReport] = None
        self.far_field_ok: Optional[bool] = None
        self.artifacts: List[Path] = []

    @classmethod
    def from_preset(cls, name: str) -> "TpsaSimulator":
        from config.scenarios import get_scenario_config
        from config.schema import load_scenario

        return cls(load_scenario(get_scenario_config(name)))

    def build(self) -> TpsaGrid:
        """Solve the phase-matching angle and sample the normalized TPSA."""
        cfg = self.config
        self.theta = cfg.crystal.resolved_angle()
        self.tpsa = build_tpsa(cfg.grid, cfg.pump, cfg.crystal, theta=self.theta)
        self.far_field_ok = far_field_validity(self.tpsa, cfg.fiber)
        return self.tpsa

    def run_measurements(self) -> Dict[str, DelayDistribution]:
        """
        Delay distributions for the unfiltered case and each configured filter.

        The PSF is applied when configured; sampling draws a histogram per case
        from the (background-lifted) distribution.
        """
        if self.tpsa is None:
            self.build()
        cfg = self.config
        fiber = cfg.fiber
        distributions = {UNFILTERED: delay_projection(self.tpsa, fiber, label=UNFILTERED)}
        for filt in cfg.filters:
            if filt.ideal:
                dist = cross_section_projection(self.tpsa, fiber, filt.channel, filt.center)
            else:
                dist = filtered_projection(self.tpsa, fiber, filt.spec)
            dist.label = filt.label
            if filt.label in distributions:
                raise ConfigurationError(f"duplicate filter case '{filt.label}'")
            distributions[filt.label] = dist

        if cfg.psf is not None:
            distributions = {label: convolve_psf(dist, cfg.psf)
                             for label, dist in distributions.items()}

        self.distributions = distributions
        self.fringes = {
            label: fringe_detect(dist, cfg.analysis.fringe_peak_threshold,
                                 cfg.analysis.fringe_valley_ratio)
            for label, dist in distributions.items()
        }

        if cfg.sampling is not None:
            self.histograms = {}
            for offset, (label, dist) in enumerate(distributions.items()):
                source = add_background(dist, cfg.sampling.background)
                self.histograms[label] = sample_coincidences(
                    source, cfg.sampling.n_events, seed=cfg.sampling.seed + offset)
        logger.info("computed %d delay distributions", len(distributions))
        return distributions

    def _case(self, channel: str) -> Optional[DelayDistribution]:
        for filt in self.config.filters:
            if filt.channel == channel:
                return self.distributions.get(filt.label)
        return None

    def run_analysis(self) -> Optional[AnalysisReport]:
        """Tilt and R from the unfiltered case plus one signal and one idler filter."""
        signal, idler = self._case(SIGNAL), self._case(IDLER)
        if signal is None or idler is None:
            logger.info("analysis skipped: needs a signal and an idler filter case")
            self.report = None
            return None
        cfg = self.config
        self.report = analyze(
            self.distributions[UNFILTERED], signal, idler,
            psf_fwhm=None if cfg.psf is None else cfg.psf.width(),
            deconvolve=cfg.analysis.deconvolve,
            peak_threshold=cfg.analysis.fringe_peak_threshold,
            valley_ratio=cfg.analysis.fringe_valley_ratio,
        )
        return self.report

    def run(self) -> Optional[AnalysisReport]:
        """Build, measure and analyze."""
        self.build()
        self.run_measurements()
        return self.run_analysis()

    def calculate_summary(self) -> Dict[str, object]:
        """Scenario-level quantities: source parameters and measured widths."""
        cfg = self.config
        summary = {
            "scenario": cfg.name,
            "cut_angle_deg": float(np.degrees(self.theta)) if self.theta is not None else None,
            "pump_fwhm_rad_s": bandwidth_to_fwhm(cfg.pump.bandwidth, cfg.pump.wavelength),
            "phase_matching_fwhm_rad_s": phase_matching_bandwidth(cfg.crystal),
            "modulation_period_rad_s": modulation_period(cfg.pump),
            "fiber_scale_s2": cfg.fiber.scale,
            "far_field_ok": self.far_field_ok,
        }
        for label, dist in self.distributions.items():
            summary[f"{label}_area"] = dist.area()
            summary[f"{label}_fringes"] = self.fringes[label].detected
        return summary

    def header(self) -> Dict[str, object]:
        """Resolved scenario, written at the top of every artifact."""
        cfg = self.config
        mod = cfg.pump.modulation
        out = {
            "scenario": cfg.name,
            "crystal_length_m": cfg.crystal.length,
            "pump_wavelength_m": cfg.crystal.pump_wavelength,
            "cut_angle_rad": self.theta if self.theta is not None else cfg.crystal.cut_angle,
            "pump_bandwidth_m": cfg.pump.bandwidth,
            "pump_normalization": cfg.pump.normalization,
            "pulse_separation_s": mod.separation if mod else None,
            "pulse_phase_rad": mod.phase if mod else None,
            "pulse_amplitude_ratio": mod.amplitude_ratio if mod else None,
            "fiber_length_m": cfg.fiber.length,
            "fiber_gvd_s2_m": cfg.fiber.gvd,
            "filters": "; ".join(
                f"{f.channel} ideal" if f.ideal else f"{f.channel} {f.spec.bandwidth:.6e} rad/s"
                for f in cfg.filters) or "none",
            "psf_fwhm_s": None if cfg.psf is None else cfg.psf.width(),
            "grid_n": cfg.grid.n,
            "grid_omega_max_rad_s": cfg.grid.omega_max,
            "sampling_events": cfg.sampling.n_events if cfg.sampling else None,
            "sampling_seed": cfg.sampling.seed if cfg.sampling else None,
            "background": cfg.sampling.background if cfg.sampling else None,
            "deconvolve": cfg.analysis.deconvolve,
        }
        return {key: (repr(value) if isinstance(value, float) else value)
                for key, value in out.items()}

    def figure_metadata(self) -> Dict[str, str]:
        """Resolved scenario as SVG/PNG document metadata."""
        return {
            "Title": f"TPSA scenario {self.config.name}",
            "Description": "; ".join(f"{key}={value}" for key, value in self.header().items()),
        }

    def pump_spectrum(self, n_points: int = 512):
        """Pump spectral intensity over +-3 bandwidths around the centre wavelength."""
        pump = self.config.pump
        half = 3 * pump.bandwidth
        wavelengths = np.linspace(pump.wavelength - half, pump.wavelength + half, n_points)
        return wavelengths, spectrum_vs_wavelength(wavelengths, pump)

    def plot_results(self, filename: Optional[Union[str, Path]] = None, figsize=(12, 12)):
        """
        TPSA map in the (W+, W-) frame, pump spectrum and delay distributions.

        Args:
            filename: Output image (format from the suffix); not saved when None

        Returns:
            The matplotlib figure (closed after saving)
        """
        if self.tpsa is None:
            raise ConfigurationError("nothing to plot: run the scenario first")
        fig, axes = plt.subplots(3, 1, figsize=figsize)

        # Plot 1: |F|^2 in the rotated frame
        ax1 = axes[0]
        grid = self.tpsa.grid
        rotated = rotate_to_pm(self.tpsa).intensity
        extent = [grid.axis[0], grid.axis[-1], grid.axis[0], grid.axis[-1]]
        ax1.imshow(rotated / rotated.max(), origin="lower", extent=extent, aspect="auto",
                   cmap="viridis")
        ax1.set_title("Two-photon spectral intensity", fontsize=12, fontweight="bold")
        ax1.set_xlabel("Ω₋ (rad/s)")
        ax1.set_ylabel("Ω₊ (rad/s)")

        # Plot 2: pump spectrum
        ax2 = axes[1]
        wavelengths, intensity = self.pump_spectrum()
        ax2.plot(wavelengths * 1e9, intensity / intensity.max(), color="purple", linewidth=2)
        ax2.set_title("Pump spectrum", fontsize=12, fontweight="bold")
        ax2.set_xlabel("Wavelength (nm)")
        ax2.set_ylabel("Intensity (norm.)")
        ax2.grid(True, alpha=0.3)

        # Plot 3: delay distributions
        ax3 = axes[2]
        for label, dist in self.distributions.items():
            ax3.plot(dist.axis * 1e9, dist.peak_normalized().density, label=label)
        for label, hist in self.histograms.items():
            if label == UNFILTERED and hist.counts.max() > 0:
                ax3.scatter(hist.centers * 1e9, hist.counts / hist.counts.max(), s=4,
                            color="gray", alpha=0.6, label="sampled coincidences")
        ax3.set_title("Signal-idler delay distributions", fontsize=12, fontweight="bold")
        ax3.set_xlabel("t_s − t_i (ns)")
        ax3.set_ylabel("Coincidences (norm.)")
        ax3.legend(loc="best")
        ax3.grid(True, alpha=0.3)

        plt.tight_layout()
        if filename is not None:
            Path(filename).parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(filename, dpi=150, bbox_inches="tight", metadata=self.figure_metadata())
            logger.info("figure saved to %s", filename)
        plt.close(fig)
        return fig

    def print_report(self):
        """Print the scenario summary and, when available, the analysis report."""
        summary = self.calculate_summary()
        print("\n" + "="*60)
        print(f"TPSA SCENARIO: {self.config.name}")
        print("="*60)

        print("\n🔬 SOURCE")
        print(f"Cut angle:              {summary['cut_angle_deg']:.3f} deg")
        print(f"Pump FWHM:              {summary['pump_fwhm_rad_s']:.4e} rad/s")
        print(f"Phase-matching FWHM:    {summary['phase_matching_fwhm_rad_s']:.4e} rad/s")
        print(f"Modulation period:      {summary['modulation_period_rad_s']:.4e} rad/s")

        print("\n🧵 FIBRE")
        print(f"k''l:                   {summary['fiber_scale_s2']:.4e} s^2")
        print(f"Far-field valid:        {summary['far_field_ok']}")

        print("\n📊 DISTRIBUTIONS")
        for label in self.distributions:
            print(f"{label:<24}fringes: {self.fringes[label].detected}")

        if self.report is not None:
            print_report(self.report)
        else:
            print("\n" + "="*60 + "\n")

    def export_results(self, directory: Optional[Union[str, Path]] = None) -> List[Path]:
        """
        Write every artifact requested by the scenario's output formats.

        Args:
            directory: Output directory; defaults to the scenario's outputs.directory

        Returns:
            Paths written, in a deterministic order
        """
        from data_io import BinaryWriter, CsvWriter, write_report_text, write_spectrum_csv

        cfg = self.config
        directory = Path(directory or cfg.outputs.directory)
        formats = cfg.outputs.formats
        header = self.header()
        stem = cfg.name
        written: List[Path] = []

        if "csv" in formats:
            csv = CsvWriter()
            dist_header = dict(header)
            if self.report is not None:
                dist_header.update({f"report_{key}": value
                                    for key, value in self.report.to_dict().items()})
            for label, dist in self.distributions.items():
                written.append(csv.write_distribution(dist, csv.target(directory, f"{stem}_{label}"),
                                                      dist_header))
            for label, hist in self.histograms.items():
                written.append(csv.write_histogram(hist, csv.target(directory, f"{stem}_{label}_counts"),
                                                   header))
            wavelengths, intensity = self.pump_spectrum()
            written.append(write_spectrum_csv(wavelengths, intensity,
                                              csv.target(directory, f"{stem}_pump_spectrum"), header))
        if "binary" in formats:
            binary = BinaryWriter()
            written.append(binary.write_grid(self.tpsa, binary.target(directory, f"{stem}_tpsa"),
                                             header))
        if "report" in formats and self.report is not None:
            written.append(write_report_text(self.report, directory / f"{stem}_report.txt", header))
        for fmt in ("svg", "png"):
            if fmt in formats:
                path = directory / f"{stem}.{fmt}"
                self.plot_results(path)
                written.append(path)

        for path in written:
            logger.info("wrote %s", path)
        return written


def run_scenario(source, output_dir: Optional[Union[str, Path]] = None,
                 export: bool = True) -> TpsaSimulator:
    """
    Load, run and export one scenario.

    Args:
        source: Scenario file path, scenario document or ScenarioConfig
        output_dir: Overrides the scenario's output directory
        export: Write artifacts when True

    Returns:
        The finished simulator (distributions, report and paths in `artifacts`)
    """
    from config.schema import ScenarioConfig, load_scenario

    config = source if isinstance(source, ScenarioConfig) else load_scenario(source)
    simulator = TpsaSimulator(config)
    simulator.run()
    simulator.artifacts = simulator.export_results(output_dir) if export else []
    return simulator
