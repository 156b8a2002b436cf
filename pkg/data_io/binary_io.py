"""
Binary Grid Codec
=================
Little-endian TPSA grid layout:

    magic  "TPSA"           4 bytes
    version                 uint32
    n0, n1                  uint32, uint32
    metadata length m       uint32             (bytes)
    axis0 start, step       float64, float64   (rad/s)
    axis1 start, step       float64, float64   (rad/s)
    chirp k''l              float64            (s^2)
    metadata                m bytes of UTF-8 `key: value` lines (resolved scenario)
    values                  n0*n1 complex, interleaved re/im float64, row-major
"""

import logging
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from core.errors import ConfigurationError
from core.tpsa import SIGNAL_IDLER_FRAME, FrequencyGrid, TpsaGrid
from .base_writer import BaseWriter, DataIOError, PathLike, header_lines, parse_header

logger = logging.getLogger(__name__)

MAGIC = b"TPSA"
VERSION = 2

HEADER_DTYPE = np.dtype([
    ("magic", "S4"),
    ("version", "<u4"),
    ("n0", "<u4"),
    ("n1", "<u4"),
    ("meta_bytes", "<u4"),
    ("start0", "<f8"),
    ("step0", "<f8"),
    ("start1", "<f8"),
    ("step1", "<f8"),
    ("chirp", "<f8"),
])
VALUE_DTYPE = np.dtype("<c16")


def write_grid_binary(tpsa: TpsaGrid, path: PathLike,
                      header: Optional[Dict[str, object]] = None) -> Path:
    """
    Write a signal/idler-frame TPSA in the binary layout.

    Args:
        tpsa: Grid to write
        path: Output file
        header: Metadata stored between the fixed header and the values

    Raises:
        DataIOError: TPSA in the rotated frame
    """
    if tpsa.frame != SIGNAL_IDLER_FRAME:
        raise DataIOError("binary grids store the signal/idler frame only")
    grid = tpsa.grid
    meta = "".join(line + "\n" for line in header_lines(header)).encode("utf-8")
    fixed = np.zeros(1, dtype=HEADER_DTYPE)
    fixed["magic"] = MAGIC
    fixed["version"] = VERSION
    fixed["n0"] = fixed["n1"] = grid.n
    fixed["meta_bytes"] = len(meta)
    fixed["start0"] = fixed["start1"] = grid.axis[0]
    fixed["step0"] = fixed["step1"] = grid.step
    fixed["chirp"] = tpsa.chirp
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(fixed.tobytes())
        f.write(meta)
        f.write(np.ascontiguousarray(tpsa.values, dtype=VALUE_DTYPE).tobytes())
    logger.debug("wrote %dx%d grid to %s", grid.n, grid.n, path)
    return path


def _read_parts(path: PathLike):
    path = BaseWriter.ensure_readable(path)
    raw = path.read_bytes()
    if len(raw) < HEADER_DTYPE.itemsize:
        raise DataIOError(f"{path}: truncated header")
    fixed = np.frombuffer(raw[:HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    if fixed["magic"] != MAGIC:
        raise DataIOError(f"{path}: bad magic {fixed['magic']!r}")
    if fixed["version"] != VERSION:
        raise DataIOError(f"{path}: unsupported version {fixed['version']}")
    meta_end = HEADER_DTYPE.itemsize + int(fixed["meta_bytes"])
    if len(raw) < meta_end:
        raise DataIOError(f"{path}: truncated metadata block")
    try:
        meta = parse_header(raw[HEADER_DTYPE.itemsize:meta_end].decode("utf-8").splitlines())
    except UnicodeDecodeError as e:
        raise DataIOError(f"{path}: metadata is not UTF-8: {e}")
    return path, fixed, meta, raw[meta_end:]


def read_grid_binary(path: PathLike) -> TpsaGrid:
    """
    Read a TPSA written by write_grid_binary.

    Raises:
        DataIOError: bad magic, unsupported version, truncated payload
                     or an axis that is not a symmetric simulator grid
    """
    path, header, _, payload = _read_parts(path)
    n0, n1 = int(header["n0"]), int(header["n1"])
    expected = n0 * n1 * VALUE_DTYPE.itemsize
    if len(payload) != expected:
        raise DataIOError(f"{path}: payload has {len(payload)} bytes, expected {expected}")
    if n0 != n1 or header["start0"] != header["start1"] or header["step0"] != header["step1"]:
        raise DataIOError(f"{path}: both axes must share one grid")
    omega_max = -float(header["start0"])
    try:
        grid = FrequencyGrid(n=n0, omega_max=omega_max)
    except ConfigurationError as e:
        raise DataIOError(f"{path}: {e}")
    if not np.isclose(grid.step, header["step0"], rtol=1e-9, atol=0):
        raise DataIOError(f"{path}: axis step does not match a symmetric grid")
    values = np.frombuffer(payload, dtype=VALUE_DTYPE).reshape(n0, n1).copy()
    return TpsaGrid(grid=grid, values=values, chirp=float(header["chirp"]))


def read_grid_metadata(path: PathLike) -> Dict[str, str]:
    """Resolved-scenario metadata stored with a binary grid."""
    return _read_parts(path)[2]


class BinaryWriter(BaseWriter):
    """Binary TPSA grids with a metadata block; distributions are CSV-only."""

    extension = ".tpsa"

    def __init__(self):
        super().__init__("binary")

    def write_grid(self, tpsa: TpsaGrid, path: PathLike,
                   header: Optional[Dict[str, object]] = None) -> Path:
        return write_grid_binary(tpsa, path, header)

    def read_grid(self, path: PathLike) -> TpsaGrid:
        return read_grid_binary(path)
