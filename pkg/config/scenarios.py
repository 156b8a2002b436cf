"""
Scenario Presets
================
Named scenario documents reproducing the reference experiment and the
double-pulse pump studies. Each entry carries display metadata plus the
scenario document accepted by `config.schema.load_scenario`.
"""

import copy
from typing import Dict, List

# Shared building blocks of the reference experiment
_CRYSTAL = {"length": "5 mm", "pump_wavelength": "404 nm"}
_FIBER = {"length": "500 m", "gvd": "4.3e-28 s^2/cm"}
_GRID = {"n": 1024, "omega_max": "8e13 rad/s"}
_PSF = {"fwhm": "90 ps"}


def _filters(bandwidth: str) -> List[Dict]:
    return [
        {"channel": "signal", "bandwidth": bandwidth},
        {"channel": "idler", "bandwidth": bandwidth},
    ]


def _double_pulse(separation: str, phase: str = "0 deg") -> Dict:
    return {"type": "double_pulse", "separation": separation, "phase": phase}


SCENARIO_CONFIG: Dict[str, Dict] = {
    "single_pulse": {
        "title": "Single Gaussian pump pulse",
        "description": "Tilted, unmodulated TPSA with its pump-envelope and phase-matching lobes",
        "category": "tpsa_shape",
        "icon": "🔆",
        "scenario": {
            "crystal": _CRYSTAL,
            "pump": {"bandwidth": "2 nm"},
            "fiber": _FIBER,
            "filters": _filters("1 nm"),
            "grid": _GRID,
            "outputs": {"formats": ["csv", "svg", "report"]},
        },
    },
    "double_pulse_520fs": {
        "title": "Pump split into two pulses 520 fs apart",
        "description": "Cosine-modulated TPSA; fringes show in the unfiltered distribution only, "
                       "90 ps instrument response",
        "category": "tpsa_shape",
        "icon": "〰️",
        "scenario": {
            "crystal": _CRYSTAL,
            "pump": {"bandwidth": "2 nm", "modulation": _double_pulse("520 fs")},
            "fiber": _FIBER,
            "filters": _filters("1 nm"),
            "psf": _PSF,
            "grid": _GRID,
            "outputs": {"formats": ["csv", "svg", "report"]},
        },
    },
    "double_pulse_1750fs": {
        "title": "Pump split into two pulses 1.75 ps apart",
        "description": "Dense modulation smeared in the unfiltered distribution, "
                       "revealed by 0.1 nm filters",
        "category": "tpsa_shape",
        "icon": "🌊",
        "scenario": {
            "crystal": _CRYSTAL,
            "pump": {"bandwidth": "2 nm", "modulation": _double_pulse("1.75 ps")},
            "fiber": _FIBER,
            "filters": _filters("0.1 nm"),
            "grid": _GRID,
            "outputs": {"formats": ["csv", "svg", "report"]},
        },
    },
    "dispersion_filtered": {
        "title": "Dispersion measurement with 1 nm filters",
        "description": "Unfiltered and filtered delay distributions after 500 m of fibre, "
                       "90 ps instrument response removed in quadrature, sampled coincidences "
                       "and tilt/R analysis",
        "category": "dispersion",
        "icon": "📡",
        "scenario": {
            "crystal": _CRYSTAL,
            "pump": {"bandwidth": "2 nm"},
            "fiber": _FIBER,
            "filters": _filters("1 nm"),
            "psf": _PSF,
            "grid": _GRID,
            "sampling": {"n_events": 20000, "seed": 7},
            "analysis": {"deconvolve": True},
            "outputs": {"formats": ["csv", "svg", "report", "binary"]},
        },
    },
    "pump_phase_zero": {
        "title": "350 fs split pump, in-phase replicas",
        "description": "Pump spectrum with a maximum at the central wavelength",
        "category": "pump",
        "icon": "➕",
        "scenario": {
            "crystal": _CRYSTAL,
            "pump": {"bandwidth": "2 nm", "modulation": _double_pulse("350 fs", "0 deg")},
            "fiber": _FIBER,
            "grid": _GRID,
            "outputs": {"formats": ["csv", "svg", "report"]},
        },
    },
    "pump_phase_pi": {
        "title": "350 fs split pump, anti-phase replicas",
        "description": "Pump spectrum with a dip at the central wavelength",
        "category": "pump",
        "icon": "➖",
        "scenario": {
            "crystal": _CRYSTAL,
            "pump": {"bandwidth": "2 nm", "modulation": _double_pulse("350 fs", "180 deg")},
            "fiber": _FIBER,
            "grid": _GRID,
            "outputs": {"formats": ["csv", "svg", "report"]},
        },
    },
    "fringes_350fs": {
        "title": "Interference fringes from an anti-phase 350 fs split",
        "description": "Double-lobed unfiltered distribution, single-lobed signal-filtered one, "
                       "90 ps instrument response",
        "category": "dispersion",
        "icon": "🎯",
        "scenario": {
            "crystal": _CRYSTAL,
            "pump": {"bandwidth": "2 nm", "modulation": _double_pulse("350 fs", "180 deg")},
            "fiber": _FIBER,
            "filters": [{"channel": "signal", "bandwidth": "1 nm"}],
            "psf": _PSF,
            "grid": _GRID,
            "outputs": {"formats": ["csv", "svg", "report"]},
        },
    },
}

CATEGORIES = ("tpsa_shape", "dispersion", "pump")


def get_scenario_config(name: str) -> Dict:
    """
    Scenario document for a preset.

    Args:
        name: Preset name

    Returns:
        Deep copy of the scenario document, with its name filled in

    Raises:
        KeyError: unknown preset
    """
    if name not in SCENARIO_CONFIG:
        raise KeyError(
            f"unknown preset '{name}', available: {', '.join(list_available_scenarios())}"
        )
    entry = SCENARIO_CONFIG[name]
    document = copy.deepcopy(entry["scenario"])
    document.setdefault("name", name)
    document.setdefault("description", entry["description"])
    return document


def list_available_scenarios() -> List[str]:
    """Sorted preset names."""
    return sorted(SCENARIO_CONFIG.keys())


def get_scenarios_by_category(category: str) -> List[str]:
    return [
        name for name, entry in SCENARIO_CONFIG.items()
        if entry.get("category") == category
    ]


def print_scenario_info(name: str):
    """
    Print detailed information about a preset.

    Args:
        name: Preset name
    """
    entry = SCENARIO_CONFIG[name]
    scenario = entry["scenario"]
    modulation = scenario["pump"].get("modulation")

    print(f"\n{'='*60}")
    print(f"{entry['icon']} {entry['title']} ({name})")
    print(f"{'='*60}")
    print(f"Description:      {entry['description']}")
    print(f"Category:         {entry['category']}")
    print(f"Crystal:          {scenario['crystal']['length']} BBO, "
          f"pump {scenario['crystal']['pump_wavelength']}")
    print(f"Pump bandwidth:   {scenario['pump']['bandwidth']}")
    if modulation:
        spacing = modulation.get("separation") or f"{modulation.get('length')} splitter"
        print(f"Double pulse:     {spacing}, phase {modulation.get('phase', '0 deg')}")
    print(f"Fibre:            {scenario['fiber']['length']}, k'' {scenario['fiber']['gvd']}")
    filters = scenario.get("filters") or []
    if filters:
        described = (f"{f['channel']} " + ("ideal" if f.get("ideal") else f.get("bandwidth", "?"))
                     for f in filters)
        print(f"Filters:          {', '.join(described)}")
    if scenario.get("psf"):
        print(f"PSF FWHM:         {scenario['psf']['fwhm']}")
    print(f"{'='*60}\n")


def print_all_scenarios():
    """Print a summary of all presets."""
    print("\n" + "="*60)
    print("AVAILABLE SCENARIO PRESETS")
    print("="*60)

    for category in CATEGORIES:
        names = get_scenarios_by_category(category)
        if names:
            print(f"\n{category.upper().replace('_', ' ')}:")
            for name in names:
                entry = SCENARIO_CONFIG[name]
                print(f"  {entry['icon']} {name:22s} - {entry['title']}")

    print(f"\n{'='*60}")
    print(f"Total Presets: {len(SCENARIO_CONFIG)}")
    print(f"{'='*60}\n")


if __name__ == "__main__":
    print_all_scenarios()
