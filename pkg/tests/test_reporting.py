"""Tests for size tables, action counts and bench reports."""

import json

import pytest

from src.monitoring.metrics_collector import MetricsCollector
from src.reporting.report_generator import (
    ALGORITHMS,
    CONVENTION_SQRT,
    CONVENTION_TABLE,
    ReportGenerator,
    component_sizes,
    op_count_report,
    op_count_table,
    size_report,
    size_table,
)
from src.utils.errors import ParameterError
from tests.conftest import make_csidh, make_toy


class TestSizes:
    """Component sizes in bits."""

    @pytest.mark.parametrize("level,mpk,msk,usk,sig", [
        (80, 29440, 640, 14721, 29624),
        (100, 46400, 800, 23201, 46632),
        (128, 75776, 1024, 37889, 76072),
        (192, 170496, 1536, 85249, 170940),
        (256, 303104, 2048, 151553, 303696),
    ])
    def test_security_levels(self, level, mpk, msk, usk, sig):
        (row,) = size_report([level])
        assert (row.mpk, row.msk, row.usk, row.upk, row.sig) == (mpk, msk, usk, mpk, sig)
        assert row.identity == row.n
        assert row.convention == CONVENTION_TABLE

    def test_byte_sizes(self):
        row = component_sizes(512, 74)
        assert row.sig_bytes == 9509
        assert row.sig_kib == pytest.approx(9.286, abs=1e-3)

    def test_sqrt_convention(self):
        row = component_sizes(512, 74, CONVENTION_SQRT)
        assert row.log2_N == 256
        assert row.sig == 4 * 74 + 2 * 74 * 256
        assert row.mpk == 75776

    def test_custom_point(self):
        row = component_sizes(9, 4)
        assert row.level is None
        assert row.sig == 16 + 72

    def test_errors(self):
        with pytest.raises(ParameterError):
            size_report([127])
        with pytest.raises(ParameterError):
            component_sizes(512, 74, "cubic")
        with pytest.raises(ParameterError):
            component_sizes(0, 74)

    def test_table(self):
        frame = size_table(size_report([80, 128]))
        assert list(frame["SIG"]) == [29624, 76072]
        assert frame.attrs["convention"] == CONVENTION_TABLE


class TestOperationCounts:
    """Group actions per algorithm."""

    @pytest.mark.parametrize("n", [4, 16])
    def test_toy_counts(self, n):
        rows = op_count_report(make_toy(101, n=n), n)
        assert [row.algorithm for row in rows] == list(ALGORITHMS)
        counts = {row.algorithm: row.actions for row in rows}
        assert counts["S2"] == 0
        for name in ALGORITHMS:
            if name != "S2":
                assert counts[name] == 2 * n
        assert all(row.actions == row.expected for row in rows)

    def test_csidh_counts(self):
        rows = op_count_report(make_csidh(n=4), 4)
        assert {row.algorithm: row.actions for row in rows}["S1"] == 8
        assert {row.algorithm: row.actions for row in rows}["Verify"] == 8

    def test_collector_statistics(self):
        collector = MetricsCollector(make_toy(101, n=4))
        op_count_report(collector.backend, 4, collector=collector)
        stats = collector.get_statistics()
        assert stats["total_measurements"] == len(ALGORITHMS)
        assert stats["total_actions"] == 6 * 8
        assert collector.mean_time("S2") is not None

    def test_table(self):
        frame = op_count_table(op_count_report(make_toy(101, n=4), 4))
        assert list(frame.columns[:4]) == ["algorithm", "n", "actions", "expected"]
        assert frame.loc[frame["algorithm"] == "S2", "complexity"].item() == "O(1)"


class TestReportGenerator:
    def test_bench_tables(self, tmp_path):
        generator = ReportGenerator(str(tmp_path))
        tables = generator.bench(make_toy(101, n=4), [128], [4], repeats=1)
        assert set(tables) == {"sizes", "operations", "timings"}
        assert tables["sizes"]["SIG"].item() == 76072
        assert len(tables["timings"]) == len(ALGORITHMS)
        text = generator.render_text(tables)
        assert "76072" in text
        assert "log2 N evaluated as log2 p" in text

    def test_bench_includes_velu_costs(self, tmp_path):
        tables = ReportGenerator(str(tmp_path)).bench(make_csidh(n=4), [80], [4], repeats=1)
        assert list(tables["velu"]["ell"]) == [3, 5, 7]

    @pytest.mark.parametrize("fmt", ["text", "json", "csv"])
    def test_write(self, tmp_path, fmt):
        generator = ReportGenerator(str(tmp_path))
        tables = {"sizes": size_table(size_report([80]))}
        path = generator.write(tables, fmt)
        assert path.exists()
        if fmt == "json":
            assert json.loads(path.read_text())["sizes"][0]["SIG"] == 29624
        elif fmt == "csv":
            assert (path / "sizes.csv").exists()
        else:
            assert "29624" in path.read_text()

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ParameterError):
            ReportGenerator(str(tmp_path)).write({}, "xml")
