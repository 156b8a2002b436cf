"""
Scenario Schema
===============
Validated scenario configuration. A scenario document is a nested dict
(JSON on disk) whose physical fields carry explicit unit strings; it is
resolved here into the frozen spec objects the simulator consumes.
"""

import copy
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from core.dispersion import CrystalSpec, FiberSpec
from core.errors import ConfigurationError
from core.measurement import PsfSpec
from core.pump import DoublePulse, PumpSpec, double_pulse_from_crystal
from core.tpsa import CHANNELS, FilterSpec, FrequencyGrid
from .constants import (
    DEFAULT_GRID_POINTS,
    DEFAULT_OMEGA_MAX,
    FRINGE_PEAK_THRESHOLD,
    FRINGE_VALLEY_RATIO,
)
from .units import parse_quantity

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "TPSA_OUTPUT_DIR"
OUTPUT_FORMATS = ("csv", "svg", "png", "report", "binary")

SECTIONS = ("name", "description", "crystal", "pump", "fiber", "filters", "psf",
            "grid", "sampling", "analysis", "outputs")


@dataclass(frozen=True)
class FilterConfig:
    """A filter case; `ideal` selects the infinitely narrow cross-section."""
    channel: str
    ideal: bool = False
    spec: Optional[FilterSpec] = None
    center: float = 0.0

    @property
    def label(self) -> str:
        suffix = "ideal" if self.ideal else "filtered"
        return f"{self.channel}_{suffix}"


@dataclass(frozen=True)
class SamplingConfig:
    n_events: int
    seed: int = 0
    background: float = 0.0


@dataclass(frozen=True)
class AnalysisConfig:
    deconvolve: bool = False
    fringe_peak_threshold: float = FRINGE_PEAK_THRESHOLD
    fringe_valley_ratio: float = FRINGE_VALLEY_RATIO


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "output"
    formats: Tuple[str, ...] = ("csv", "svg", "report")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    crystal: CrystalSpec
    pump: PumpSpec
    fiber: FiberSpec
    grid: FrequencyGrid
    filters: Tuple[FilterConfig, ...] = ()
    psf: Optional[PsfSpec] = None
    sampling: Optional[SamplingConfig] = None
    analysis: AnalysisConfig = AnalysisConfig()
    outputs: OutputConfig = OutputConfig()
    description: str = ""
    document: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)


def _section(doc: Dict[str, Any], key: str, allowed: Tuple[str, ...], required: bool = True) -> Dict:
    value = doc.get(key)
    if value is None:
        if required:
            raise ConfigurationError(f"missing section '{key}'")
        return {}
    if not isinstance(value, dict):
        raise ConfigurationError(f"section '{key}' must be a mapping")
    unknown = set(value) - set(allowed)
    if unknown:
        raise ConfigurationError(f"unknown keys in '{key}': {sorted(unknown)}")
    return value


def _require(section: Dict, key: str, where: str):
    if key not in section:
        raise ConfigurationError(f"missing '{where}.{key}'")
    return section[key]


def _flag(section: Dict, key: str, where: str, default: bool = False) -> bool:
    value = section.get(key, default)
    if not isinstance(value, bool):
        raise ConfigurationError(f"'{where}.{key}' must be true or false, got {value!r}")
    return value


def _parse_crystal(doc: Dict) -> CrystalSpec:
    sec = _section(doc, "crystal", ("length", "pump_wavelength", "cut_angle"))
    angle = sec.get("cut_angle")
    return CrystalSpec(
        length=parse_quantity(_require(sec, "length", "crystal"), "length"),
        pump_wavelength=parse_quantity(_require(sec, "pump_wavelength", "crystal"), "length"),
        cut_angle=None if angle is None else parse_quantity(angle, "angle"),
    )


def _parse_modulation(mod: Optional[Dict], pump_wavelength: float) -> Optional[DoublePulse]:
    if mod is None:
        return None
    if not isinstance(mod, dict):
        raise ConfigurationError("pump.modulation must be a mapping or null")
    kind = mod.get("type")
    phase = parse_quantity(mod.get("phase", "0 rad"), "angle")
    if kind == "double_pulse":
        unknown = set(mod) - {"type", "separation", "phase", "amplitude_ratio"}
        if unknown:
            raise ConfigurationError(f"unknown keys in 'pump.modulation': {sorted(unknown)}")
        return DoublePulse(
            separation=parse_quantity(_require(mod, "separation", "pump.modulation"), "time"),
            phase=phase,
            amplitude_ratio=parse_quantity(mod.get("amplitude_ratio", 1.0), "dimensionless"),
        )
    if kind == "splitter":
        unknown = set(mod) - {"type", "length", "phase"}
        if unknown:
            raise ConfigurationError(f"unknown keys in 'pump.modulation': {sorted(unknown)}")
        length = parse_quantity(_require(mod, "length", "pump.modulation"), "length")
        return double_pulse_from_crystal(length, phase, pump_wavelength)
    raise ConfigurationError(f"unknown modulation type {kind!r}, expected 'double_pulse' or 'splitter'")


def _parse_pump(doc: Dict, crystal: CrystalSpec) -> PumpSpec:
    sec = _section(doc, "pump", ("bandwidth", "modulation", "normalization"))
    return PumpSpec(
        wavelength=crystal.pump_wavelength,
        bandwidth=parse_quantity(_require(sec, "bandwidth", "pump"), "length"),
        modulation=_parse_modulation(sec.get("modulation"), crystal.pump_wavelength),
        normalization=sec.get("normalization", "peak"),
    )


def _parse_fiber(doc: Dict) -> FiberSpec:
    sec = _section(doc, "fiber", ("length", "gvd"))
    kwargs = {"length": parse_quantity(_require(sec, "length", "fiber"), "length")}
    if "gvd" in sec:
        kwargs["gvd"] = parse_quantity(sec["gvd"], "gvd")
    return FiberSpec(**kwargs)


def _parse_bandwidth(value: Union[str, float], degenerate_wavelength: float) -> float:
    """Filter bandwidth in wavelength (at the degenerate wavelength) or rad/s."""
    try:
        return parse_quantity(value, "angular_frequency")
    except ConfigurationError:
        width = parse_quantity(value, "length")
        return FilterSpec.from_wavelength("signal", width, degenerate_wavelength).bandwidth


def _parse_filters(doc: Dict, crystal: CrystalSpec) -> Tuple[FilterConfig, ...]:
    raw = doc.get("filters") or []
    if not isinstance(raw, list):
        raise ConfigurationError("'filters' must be a list")
    out = []
    for n, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ConfigurationError(f"filters[{n}] must be a mapping")
        unknown = set(item) - {"channel", "bandwidth", "center", "ideal"}
        if unknown:
            raise ConfigurationError(f"unknown keys in filters[{n}]: {sorted(unknown)}")
        channel = item.get("channel")
        if channel not in CHANNELS:
            raise ConfigurationError(f"filters[{n}].channel must be one of {CHANNELS}")
        center = parse_quantity(item.get("center", "0 rad/s"), "angular_frequency")
        if _flag(item, "ideal", "filters"):
            out.append(FilterConfig(channel=channel, ideal=True, center=center))
            continue
        bandwidth = _parse_bandwidth(_require(item, "bandwidth", f"filters[{n}]"),
                                     2 * crystal.pump_wavelength)
        spec = FilterSpec(channel=channel, center=center, bandwidth=bandwidth)
        out.append(FilterConfig(channel=channel, spec=spec, center=center))
    return tuple(out)


def _parse_psf(doc: Dict, base_dir: Optional[Path]) -> Optional[PsfSpec]:
    if doc.get("psf") is None:
        return None
    sec = _section(doc, "psf", ("fwhm", "file"))
    if "file" in sec:
        from data_io import psf_from_csv

        path = Path(sec["file"])
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        return psf_from_csv(path)
    return PsfSpec(fwhm=parse_quantity(_require(sec, "fwhm", "psf"), "time"))


def _parse_grid(doc: Dict) -> FrequencyGrid:
    sec = _section(doc, "grid", ("n", "omega_max"), required=False)
    omega_max = sec.get("omega_max")
    return FrequencyGrid(
        n=int(parse_quantity(sec.get("n", DEFAULT_GRID_POINTS), "dimensionless")),
        omega_max=DEFAULT_OMEGA_MAX if omega_max is None
        else parse_quantity(omega_max, "angular_frequency"),
    )


def _parse_sampling(doc: Dict) -> Optional[SamplingConfig]:
    if doc.get("sampling") is None:
        return None
    sec = _section(doc, "sampling", ("n_events", "seed", "background"))
    n_events = int(parse_quantity(_require(sec, "n_events", "sampling"), "dimensionless"))
    if n_events <= 0:
        raise ConfigurationError("sampling.n_events must be positive")
    return SamplingConfig(
        n_events=n_events,
        seed=int(parse_quantity(sec.get("seed", 0), "dimensionless")),
        background=parse_quantity(sec.get("background", 0.0), "dimensionless"),
    )


def _parse_analysis(doc: Dict) -> AnalysisConfig:
    sec = _section(doc, "analysis", ("deconvolve", "fringe_peak_threshold", "fringe_valley_ratio"),
                   required=False)
    return AnalysisConfig(
        deconvolve=_flag(sec, "deconvolve", "analysis"),
        fringe_peak_threshold=parse_quantity(
            sec.get("fringe_peak_threshold", FRINGE_PEAK_THRESHOLD), "dimensionless"),
        fringe_valley_ratio=parse_quantity(
            sec.get("fringe_valley_ratio", FRINGE_VALLEY_RATIO), "dimensionless"),
    )


def _parse_outputs(doc: Dict) -> OutputConfig:
    sec = _section(doc, "outputs", ("directory", "formats"), required=False)
    directory = os.environ.get(OUTPUT_DIR_ENV) or sec.get("directory", "output")
    formats = tuple(sec.get("formats", OutputConfig.formats))
    unknown = set(formats) - set(OUTPUT_FORMATS)
    if unknown:
        raise ConfigurationError(f"unknown output formats {sorted(unknown)}")
    return OutputConfig(directory=str(directory), formats=formats)


def parse_scenario(document: Dict[str, Any], base_dir: Optional[Path] = None) -> ScenarioConfig:
    """
    Validate a scenario document and resolve it into spec objects.

    Args:
        document: Nested scenario mapping
        base_dir: Directory for resolving relative file paths (PSF tables)

    Raises:
        ConfigurationError: schema or unit violation
    """
    if not isinstance(document, dict):
        raise ConfigurationError("scenario document must be a mapping")
    unknown = set(document) - set(SECTIONS)
    if unknown:
        raise ConfigurationError(f"unknown sections: {sorted(unknown)}")
    crystal = _parse_crystal(document)
    config = ScenarioConfig(
        name=str(document.get("name", "scenario")),
        description=str(document.get("description", "")),
        crystal=crystal,
        pump=_parse_pump(document, crystal),
        fiber=_parse_fiber(document),
        grid=_parse_grid(document),
        filters=_parse_filters(document, crystal),
        psf=_parse_psf(document, base_dir),
        sampling=_parse_sampling(document),
        analysis=_parse_analysis(document),
        outputs=_parse_outputs(document),
        document=copy.deepcopy(document),
    )
    logger.info("loaded scenario '%s'", config.name)
    return config


def load_scenario(source: Union[str, Path, Dict[str, Any]]) -> ScenarioConfig:
    """Load a scenario from a JSON file path or an in-memory document."""
    if isinstance(source, dict):
        return parse_scenario(source)
    path = Path(source)
    if not path.exists():
        raise ConfigurationError(f"scenario file not found: {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"invalid JSON in {path}: {e}")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"cannot read {path}: {e}")
    return parse_scenario(document, base_dir=path.parent)
