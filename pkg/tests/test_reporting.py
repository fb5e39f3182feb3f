"""
Tests for report serialization.
"""

import csv
import io
import json

import pytest

from congruent_census.census import run_census
from congruent_census.models import CensusConfig
from congruent_census.reporting import (
    CSV_COLUMNS,
    csv_rows,
    render_text,
    report_from_json,
    report_to_csv,
    report_to_json,
    write_report,
)


@pytest.fixture(scope="module")
def report():
    return run_census(CensusConfig(x=100, k=1, checkpoints=[50]))


class TestReporting:
    def test_json_round_trip(self, report):
        restored = report_from_json(report_to_json(report))
        assert restored == report

    def test_json_shape(self, report):
        payload = json.loads(report_to_json(report))
        assert payload["config"]["k"] == 1
        assert "partitions" not in payload["config"]
        final = payload["checkpoints"][-1]
        assert final["counts"]["C_k"] == 25
        assert final["theory"]["P_k_d1/Q_k"] == {"fraction": "1/2", "decimal": 0.5}

    def test_csv(self, report):
        rows = list(csv.DictReader(io.StringIO(report_to_csv(report))))
        assert list(rows[0]) == CSV_COLUMNS
        by_key = {(row["x"], row["class"]): row for row in rows}
        assert by_key[("100", "C_k")]["count"] == "25"
        assert by_key[("100", "Q_k")]["theory_fraction"] == "1/4"
        assert by_key[("100", "B|alpha=9|A=0")]["count"] == "2"
        assert by_key[("100", "C_k")]["ratio"] == ""

    def test_csv_rows_cover_every_class(self, report):
        rows = csv_rows(report)
        per_checkpoint = len(report.checkpoints[-1].counts) + len(report.checkpoints[-1].buckets)
        assert len(rows) == 2 * per_checkpoint

    def test_write_report_picks_format_from_suffix(self, report, tmp_path):
        json_path = tmp_path / "report.json"
        csv_path = tmp_path / "report.csv"
        write_report(report, json_path)
        write_report(report, csv_path)
        assert report_from_json(json_path.read_text()) == report
        assert csv_path.read_text().startswith(",".join(CSV_COLUMNS))

    def test_render_text(self, report):
        text = render_text(report)
        assert text.splitlines()[0] == "census x=100 k=1 filter=all n_mod8=* convention=d1"
        assert "x=100 " in text
        assert "P_k_d1/Q_k=0.800000 theory=1/2 (0.500000)" in text
