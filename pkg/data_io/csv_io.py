"""
CSV Codec
=========
Delay distributions, coincidence histograms and TPSA grids as CSV tables,
each preceded by a `# key: value` header block with the resolved scenario.
"""

import logging
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pandas as pd

from core.errors import ConfigurationError, DomainError
from core.measurement import CoincidenceHistogram, DelayDistribution, PsfSpec
from core.tpsa import FrequencyGrid, TpsaGrid
from .base_writer import BaseWriter, DataIOError, PathLike, header_lines, parse_header

logger = logging.getLogger(__name__)

DELAY_COLUMN = "delay_s"
DENSITY_COLUMN = "density"
PSF_COLUMN = "value"


def _write_table(df: pd.DataFrame, path: PathLike, header: Optional[Dict[str, object]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        for line in header_lines(header):
            f.write(line + "\n")
        df.to_csv(f, index=False, float_format="%.10e")
    logger.debug("wrote %d rows to %s", len(df), path)
    return path


def _read_table(path: PathLike):
    path = BaseWriter.ensure_readable(path)
    try:
        with open(path, encoding="utf-8") as f:
            header = parse_header(f)
        df = pd.read_csv(path, comment="#")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError, OSError) as e:
        raise DataIOError(f"cannot parse {path}: {e}")
    return df, header


def write_distribution_csv(dist: DelayDistribution, path: PathLike,
                           header: Optional[Dict[str, object]] = None) -> Path:
    """
    Write a delay distribution as `delay_s,density`.

    Args:
        dist: Distribution to write
        path: Output file
        header: Extra metadata lines (resolved scenario values)
    """
    meta = {"label": dist.label, "normalization": dist.normalization}
    if dist.scale is not None:
        meta["scale_s2"] = repr(float(dist.scale))
    meta.update(dist.metadata)
    meta.update(header or {})
    df = pd.DataFrame({DELAY_COLUMN: dist.axis, DENSITY_COLUMN: dist.density})
    return _write_table(df, path, meta)


def read_distribution_csv(path: PathLike) -> DelayDistribution:
    """
    Read a `delay_s,density` table written by write_distribution_csv or by hand.

    Raises:
        DataIOError: missing columns or malformed axis
    """
    df, header = _read_table(path)
    missing = {DELAY_COLUMN, DENSITY_COLUMN} - set(df.columns)
    if missing:
        raise DataIOError(f"{path}: missing columns {sorted(missing)}")
    scale = header.pop("scale_s2", None)
    try:
        return DelayDistribution(
            axis=df[DELAY_COLUMN].to_numpy(dtype=float),
            density=df[DENSITY_COLUMN].to_numpy(dtype=float),
            normalization=header.pop("normalization", "none"),
            scale=None if scale is None else float(scale),
            label=header.pop("label", Path(path).stem),
            metadata=header,
        )
    except (ConfigurationError, DomainError, ValueError) as e:
        raise DataIOError(f"{path}: {e}")


def write_histogram_csv(hist: CoincidenceHistogram, path: PathLike,
                        header: Optional[Dict[str, object]] = None) -> Path:
    """Write sampled coincidences as `bin_left_s,bin_right_s,counts`."""
    meta = {"total": hist.total, "seed": hist.seed}
    meta.update(header or {})
    df = pd.DataFrame({
        "bin_left_s": hist.edges[:-1],
        "bin_right_s": hist.edges[1:],
        "counts": hist.counts,
    })
    return _write_table(df, path, meta)


def write_grid_csv(tpsa: TpsaGrid, path: PathLike,
                   header: Optional[Dict[str, object]] = None) -> Path:
    """Write a TPSA in long format: `omega_s,omega_i,real,imag` (rad/s)."""
    s, i = tpsa.grid.mesh()
    meta = {"frame": tpsa.frame, "chirp_s2": repr(float(tpsa.chirp)), "n": tpsa.grid.n,
            "omega_max": repr(float(tpsa.grid.omega_max))}
    meta.update(header or {})
    df = pd.DataFrame({
        "omega_s": s.ravel(),
        "omega_i": i.ravel(),
        "real": tpsa.values.real.ravel(),
        "imag": tpsa.values.imag.ravel(),
    })
    return _write_table(df, path, meta)


def read_grid_csv(path: PathLike) -> TpsaGrid:
    df, header = _read_table(path)
    try:
        grid = FrequencyGrid(n=int(header["n"]), omega_max=float(header["omega_max"]))
        values = (df["real"].to_numpy() + 1j * df["imag"].to_numpy()).reshape(grid.n, grid.n)
        return TpsaGrid(grid=grid, values=values, frame=header.get("frame", "signal_idler"),
                        chirp=float(header.get("chirp_s2", 0.0)))
    except (KeyError, ValueError, ConfigurationError) as e:
        raise DataIOError(f"{path}: malformed grid table ({e})")


def write_spectrum_csv(wavelengths: np.ndarray, intensity: np.ndarray, path: PathLike,
                       header: Optional[Dict[str, object]] = None) -> Path:
    """Write a pump spectrum as `wavelength_m,intensity`."""
    df = pd.DataFrame({"wavelength_m": wavelengths, "intensity": intensity})
    return _write_table(df, path, header)


def psf_from_csv(path: PathLike) -> PsfSpec:
    """
    Tabulated instrument response from a `delay_s,value` (or `delay_s,density`) table.

    Raises:
        DataIOError: unreadable table or invalid response
    """
    df, _ = _read_table(path)
    column = PSF_COLUMN if PSF_COLUMN in df.columns else DENSITY_COLUMN
    if DELAY_COLUMN not in df.columns or column not in df.columns:
        raise DataIOError(f"{path}: PSF table needs '{DELAY_COLUMN}' and '{PSF_COLUMN}' columns")
    axis = df[DELAY_COLUMN].to_numpy(dtype=float)
    values = df[column].to_numpy(dtype=float)
    if np.any(np.diff(axis) <= 0):
        raise DataIOError(f"{path}: PSF delay axis must be strictly increasing")
    try:
        return PsfSpec.tabulated(axis, values)
    except ConfigurationError as e:
        raise DataIOError(f"{path}: {e}")


class CsvWriter(BaseWriter):
    """CSV tables with a metadata header block."""

    extension = ".csv"

    def __init__(self):
        super().__init__("csv")

    def write_grid(self, tpsa, path, header=None):
        return write_grid_csv(tpsa, path, header)

    def read_grid(self, path):
        return read_grid_csv(path)

    def write_distribution(self, dist, path, header=None):
        return write_distribution_csv(dist, path, header)

    def write_histogram(self, hist: CoincidenceHistogram, path: PathLike,
                        header: Optional[Dict[str, object]] = None) -> Path:
        return write_histogram_csv(hist, path, header)
