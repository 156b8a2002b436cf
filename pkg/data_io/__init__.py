"""
Data I/O Module
===============
Writers and readers for simulator artifacts: CSV tables, binary TPSA grids
and text reports.
"""

from .base_writer import BaseWriter, DataIOError
from .binary_io import BinaryWriter, read_grid_binary, read_grid_metadata, write_grid_binary
from .csv_io import (
    CsvWriter,
    psf_from_csv,
    read_distribution_csv,
    read_grid_csv,
    write_distribution_csv,
    write_grid_csv,
    write_histogram_csv,
    write_spectrum_csv,
)
from .report_io import read_report_text, write_report_text

__all__ = [
    'BaseWriter',
    'DataIOError',
    'BinaryWriter',
    'CsvWriter',
    'read_grid_binary',
    'read_grid_metadata',
    'write_grid_binary',
    'psf_from_csv',
    'read_distribution_csv',
    'read_grid_csv',
    'write_distribution_csv',
    'write_grid_csv',
    'write_histogram_csv',
    'write_spectrum_csv',
    'read_report_text',
    'write_report_text',
]
