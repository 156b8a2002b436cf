"""Tests for the data_io package"""

import numpy as np
import pytest

from core.analysis import analyze
from core.dispersion import FiberSpec
from core.measurement import CoincidenceHistogram, DelayDistribution
from core.tpsa import apply_fiber, rotate_to_pm
from data_io import (
    BinaryWriter,
    CsvWriter,
    DataIOError,
    psf_from_csv,
    read_distribution_csv,
    read_grid_binary,
    read_grid_csv,
    read_grid_metadata,
    read_report_text,
    write_distribution_csv,
    write_grid_binary,
    write_histogram_csv,
    write_report_text,
)
from data_io.base_writer import header_lines, parse_header
from data_io.binary_io import HEADER_DTYPE


@pytest.fixture
def distribution():
    axis = np.linspace(-1e-9, 1e-9, 501)
    return DelayDistribution(axis=axis, density=np.exp(-axis ** 2 / (2 * (1e-10) ** 2)),
                             scale=2.15e-23, label="unfiltered")


class TestHeader:
    def test_lines_and_parse(self):
        lines = header_lines({"scenario": "demo", "fiber_length_m": 500.0})
        assert lines == ["# scenario: demo", "# fiber_length_m: 500.0"]
        assert parse_header(lines + ["delay_s,density"]) == {"scenario": "demo",
                                                             "fiber_length_m": "500.0"}

    def test_empty(self):
        assert header_lines(None) == []


class TestCsv:
    def test_distribution(self, tmp_path, distribution):
        path = write_distribution_csv(distribution, tmp_path / "dist.csv", {"scenario": "demo"})
        text = path.read_text().splitlines()
        assert text[0] == "# label: unfiltered"
        assert "delay_s,density" in text
        back = read_distribution_csv(path)
        assert np.allclose(back.axis, distribution.axis, rtol=1e-9)
        assert np.allclose(back.density, distribution.density, rtol=1e-9)
        assert back.scale == pytest.approx(distribution.scale, rel=1e-12)
        assert back.label == "unfiltered"
        assert back.metadata["scenario"] == "demo"

    def test_hand_written_table(self, tmp_path):
        path = tmp_path / "reference.csv"
        path.write_text("delay_s,density\n-1e-10,0.5\n0,1\n1e-10,0.5\n")
        dist = read_distribution_csv(path)
        assert dist.label == "reference"
        assert dist.scale is None
        assert dist.density.max() == 1.0

    def test_missing_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("time,counts\n0,1\n1,2\n")
        with pytest.raises(DataIOError):
            read_distribution_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataIOError):
            read_distribution_csv(tmp_path / "absent.csv")

    def test_non_uniform_axis(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("delay_s,density\n0,1\n1,2\n3,1\n")
        with pytest.raises(DataIOError):
            read_distribution_csv(path)

    def test_histogram(self, tmp_path):
        hist = CoincidenceHistogram(edges=np.array([0.0, 1.0, 2.0]), counts=np.array([3, 4]),
                                    total=7, seed=11)
        path = write_histogram_csv(hist, tmp_path / "counts.csv")
        text = path.read_text()
        assert "# total: 7" in text
        assert "# seed: 11" in text
        assert "bin_left_s,bin_right_s,counts" in text

    def test_grid(self, tmp_path, source_tpsa, fiber):
        chirped = apply_fiber(source_tpsa, fiber)
        writer = CsvWriter()
        path = writer.write_grid(chirped, writer.target(tmp_path, "grid"))
        assert path.suffix == ".csv"
        back = read_grid_csv(path)
        assert back.grid == chirped.grid
        assert back.chirp == pytest.approx(fiber.scale, rel=1e-12)
        assert np.allclose(back.values, chirped.values, rtol=1e-9, atol=1e-12 * np.abs(chirped.values).max())

    def test_psf_table(self, tmp_path):
        path = tmp_path / "psf.csv"
        path.write_text("# instrument: tac\ndelay_s,value\n-1e-10,0\n0,1\n1e-10,0\n")
        psf = psf_from_csv(path)
        assert psf.is_tabulated
        assert psf.width() == pytest.approx(1e-10)

    def test_psf_table_unsorted(self, tmp_path):
        path = tmp_path / "psf.csv"
        path.write_text("delay_s,value\n0,1\n-1e-10,0\n1e-10,0\n")
        with pytest.raises(DataIOError):
            psf_from_csv(path)


class TestBinary:
    def test_header_size(self):
        assert HEADER_DTYPE.itemsize == 60

    def test_grid(self, tmp_path, source_tpsa, fiber):
        chirped = apply_fiber(source_tpsa, fiber)
        writer = BinaryWriter()
        path = writer.write_grid(chirped, writer.target(tmp_path, "grid"))
        assert path.suffix == ".tpsa"
        n = source_tpsa.grid.n
        assert path.stat().st_size == 60 + 16 * n * n
        assert path.read_bytes()[:4] == b"TPSA"
        back = read_grid_binary(path)
        assert np.array_equal(back.values, chirped.values)
        assert back.chirp == fiber.scale
        assert back.grid == chirped.grid

    def test_resolved_config_block(self, tmp_path, source_tpsa, fiber):
        chirped = apply_fiber(source_tpsa, fiber)
        header = {"scenario": "demo", "fiber_length_m": 500.0, "filters": "signal ideal"}
        path = write_grid_binary(chirped, tmp_path / "grid.tpsa", header)
        assert read_grid_metadata(path) == {"scenario": "demo", "fiber_length_m": "500.0",
                                            "filters": "signal ideal"}
        back = read_grid_binary(path)
        assert np.array_equal(back.values, chirped.values)
        assert back.chirp == fiber.scale

    def test_no_config_block(self, tmp_path, source_tpsa):
        assert read_grid_metadata(write_grid_binary(source_tpsa, tmp_path / "grid.tpsa")) == {}

    def test_bad_magic(self, tmp_path, source_tpsa):
        path = write_grid_binary(source_tpsa, tmp_path / "grid.tpsa")
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(bytes(raw))
        with pytest.raises(DataIOError):
            read_grid_binary(path)

    def test_truncated(self, tmp_path, source_tpsa):
        path = write_grid_binary(source_tpsa, tmp_path / "grid.tpsa")
        path.write_bytes(path.read_bytes()[:-16])
        with pytest.raises(DataIOError):
            read_grid_binary(path)

    def test_rotated_frame(self, tmp_path, source_tpsa):
        with pytest.raises(DataIOError):
            write_grid_binary(rotate_to_pm(source_tpsa), tmp_path / "grid.tpsa")

    def test_no_distributions(self, tmp_path, distribution):
        with pytest.raises(DataIOError):
            BinaryWriter().write_distribution(distribution, tmp_path / "dist.tpsa")


class TestReport:
    def test_roundtrip(self, tmp_path, distribution):
        narrow = DelayDistribution(axis=distribution.axis,
                                   density=np.exp(-distribution.axis ** 2 / (2 * (4e-11) ** 2)),
                                   scale=distribution.scale)
        report = analyze(distribution, narrow, narrow)
        path = write_report_text(report, tmp_path / "report.txt", {"scenario": "demo"})
        text = path.read_text()
        assert text.startswith("# scenario: demo")
        values = read_report_text(path)
        assert float(values["alpha_deg"]) == pytest.approx(45.0, rel=1e-4)
        assert values["fringe_detected"] == "False"
        assert "scenario" not in values


def test_zero_fiber_grid_roundtrip(tmp_path, source_tpsa):
    plain = apply_fiber(source_tpsa, FiberSpec(length=0.0))
    back = read_grid_binary(write_grid_binary(plain, tmp_path / "plain.tpsa"))
    assert back.chirp == 0.0
