"""Tests for CSV and JSON report rendering."""

import json
import math

from ballgreen.models import PropertyResult, ReportRow
from ballgreen.report import (
    REPORT_COLUMNS,
    VERIFY_COLUMNS,
    OutputFormat,
    format_float,
    property_row,
    render,
    write_report,
)


def make_row(**overrides) -> ReportRow:
    values = {
        "quantity": "p_to_inf",
        "n": 3,
        "p": 2.0,
        "q": 2.0,
        "closed_form": 1 / math.sqrt(12 * math.pi),
        "numeric": 0.16286750396763996,
        "abs_err": 1e-17,
        "rel_err": 6e-17,
        "argmax_t": 0.0,
        "samples": 0,
        "seed": 7,
    }
    values.update(overrides)
    return ReportRow(**values)


class TestCsv:
    def test_header_order(self):
        """Test the exact column header."""
        text = render([make_row()], OutputFormat.CSV)
        header = text.splitlines()[0]
        assert header == (
            "quantity,n,p,q,closed_form,numeric,abs_err,rel_err,argmax_t,samples,seed,runtime_ms"
        )
        assert tuple(header.split(",")) == REPORT_COLUMNS

    def test_floats_round_trip(self):
        """Test that 17 significant digits recover the binary64 value."""
        row = make_row()
        cells = render([row], OutputFormat.CSV).splitlines()[1].split(",")
        assert float(cells[REPORT_COLUMNS.index("closed_form")]) == row.closed_form
        assert format_float(0.1) == "0.10000000000000001"

    def test_nan_and_inf(self):
        """Test that non-finite values are written as nan and inf."""
        cells = render([make_row(p=math.nan, q=math.inf)], OutputFormat.CSV).splitlines()[1]
        assert ",nan,inf," in cells

    def test_verify_rows_add_passed_column(self):
        """Test that rows carrying a verdict switch to the verify header."""
        text = render([make_row(passed=True)], OutputFormat.CSV)
        lines = text.splitlines()
        assert tuple(lines[0].split(",")) == VERIFY_COLUMNS
        assert lines[1].endswith(",true")

    def test_empty_table(self):
        """Test that an empty table still has its header."""
        assert render([], OutputFormat.CSV) == ",".join(REPORT_COLUMNS) + "\n"


class TestJson:
    def test_parses_and_keeps_order(self):
        """Test that the output is valid JSON with keys in column order."""
        data = json.loads(render([make_row(), make_row(n=4)], OutputFormat.JSON))
        assert [row["n"] for row in data] == [3, 4]
        assert tuple(data[0]) == REPORT_COLUMNS

    def test_non_finite_as_null(self):
        """Test that nan and inf become null."""
        data = json.loads(render([make_row(p=math.nan, q=math.inf)], OutputFormat.JSON))
        assert data[0]["p"] is None
        assert data[0]["q"] is None

    def test_empty_array(self):
        """Test that no rows render as an empty array."""
        assert render([], OutputFormat.JSON) == "[]\n"


class TestWriteReport:
    def test_writes_file(self, tmp_path):
        """Test that the rendered text is written to the requested path."""
        out = tmp_path / "nested" / "report.csv"
        text = write_report([make_row()], OutputFormat.CSV, out)
        assert out.read_text(encoding="utf-8") == text

    def test_byte_identical_reruns(self, tmp_path):
        """Test that equal rows give byte-identical files."""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        write_report([make_row()], OutputFormat.JSON, first)
        write_report([make_row()], OutputFormat.JSON, second)
        assert first.read_bytes() == second.read_bytes()


class TestPropertyRow:
    def test_conversion(self):
        """Test that a property result becomes a verify row."""
        result = PropertyResult(
            suite="norms",
            name="lambda1_n3",
            expected=math.pi**2,
            measured=math.pi**2 + 1e-9,
            abs_err=1e-9,
            passed=True,
            n=3,
        )
        row = property_row(result, seed=11)
        assert row.quantity == "norms.lambda1_n3"
        assert row.passed is True
        assert row.seed == 11
        assert math.isnan(row.p)
        assert row.rel_err == abs(1e-9 / math.pi**2)

    def test_zero_expected(self):
        """Test that rel_err falls back to abs_err when the expected value is 0."""
        result = PropertyResult(
            suite="geometry", name="gap", expected=0.0, measured=1e-13, abs_err=1e-13, passed=True
        )
        assert property_row(result, seed=7).rel_err == 1e-13
