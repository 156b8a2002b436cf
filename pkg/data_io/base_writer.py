"""
Base Writer
===========
Abstract base class for artifact writers (CSV tables, binary grids).
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from core.errors import TpsaError
from core.measurement import DelayDistribution
from core.tpsa import TpsaGrid

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
HEADER_PREFIX = "# "


class DataIOError(TpsaError):
    """Malformed or unreadable artifact file."""
    pass


def header_lines(header: Optional[Dict[str, object]]) -> List[str]:
    """`# key: value` lines for a metadata header block."""
    if not header:
        return []
    return [f"{HEADER_PREFIX}{key}: {value}" for key, value in header.items()]


def parse_header(lines: Iterable[str]) -> Dict[str, str]:
    """Inverse of header_lines; stops at the first non-comment line."""
    out = {}
    for line in lines:
        if not line.startswith("#"):
            break
        key, sep, value = line[1:].strip().partition(":")
        if sep:
            out[key.strip()] = value.strip()
    return out


class BaseWriter(ABC):
    """
    Abstract base class for artifact writers.

    Subclasses implement the grid codec; distributions default to
    unsupported so binary-only formats need not handle them.
    """

    extension = ""

    def __init__(self, format_name: str):
        """
        Args:
            format_name: Short format name used in logs ("csv", "binary")
        """
        self.format_name = format_name

    @abstractmethod
    def write_grid(self, tpsa: TpsaGrid, path: PathLike,
                   header: Optional[Dict[str, object]] = None) -> Path:
        """
        Write a sampled TPSA.

        Returns:
            Path written
        """
        pass

    @abstractmethod
    def read_grid(self, path: PathLike) -> TpsaGrid:
        pass

    def write_distribution(self, dist: DelayDistribution, path: PathLike,
                           header: Optional[Dict[str, object]] = None) -> Path:
        raise DataIOError(f"{self.format_name} writer does not store delay distributions")

    def target(self, directory: PathLike, stem: str) -> Path:
        """Output path `<directory>/<stem><extension>`, creating the directory."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        return directory / f"{stem}{self.extension}"

    @staticmethod
    def ensure_readable(path: PathLike) -> Path:
        path = Path(path)
        if not path.is_file():
            raise DataIOError(f"file not found: {path}")
        return path
