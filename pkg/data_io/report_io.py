"""
Report Files
============
Plain-text analysis reports with the same header block as the CSV tables.
"""

from pathlib import Path
from typing import Dict, Optional

from core.analysis import AnalysisReport, report_to_text
from .base_writer import PathLike, header_lines, parse_header


def write_report_text(report: AnalysisReport, path: PathLike,
                      header: Optional[Dict[str, object]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = header_lines(header) + [report_to_text(report)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_report_text(path: PathLike) -> Dict[str, str]:
    """`key: value` pairs of a report body, header block skipped."""
    text = Path(path).read_text(encoding="utf-8").splitlines()
    body = [line for line in text if line and not line.startswith("#")]
    return parse_header("#" + line for line in body)
