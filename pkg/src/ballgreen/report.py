"""CSV and JSON artifacts for report rows.

Floats are written with 17 significant digits so both encodings carry the exact binary64
value; JSON has no literal for nan or inf and writes null instead.
"""

import csv
import io
import json
import math
from enum import StrEnum
from pathlib import Path

from ballgreen.models import PropertyResult, ReportRow

REPORT_COLUMNS = (
    "quantity",
    "n",
    "p",
    "q",
    "closed_form",
    "numeric",
    "abs_err",
    "rel_err",
    "argmax_t",
    "samples",
    "seed",
    "runtime_ms",
)
VERIFY_COLUMNS = (*REPORT_COLUMNS, "passed")


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


def format_float(value: float) -> str:
    return format(value, ".17g")


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value) if math.isfinite(value) else "null"
    if isinstance(value, int):
        return str(value)
    return json.dumps(value)


def columns_for(rows: list[ReportRow]) -> tuple[str, ...]:
    """Verify tables carry the extra pass/fail column."""
    return VERIFY_COLUMNS if any(row.passed is not None for row in rows) else REPORT_COLUMNS


def render_csv(rows: list[ReportRow]) -> str:
    columns = columns_for(rows)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        data = row.model_dump()
        writer.writerow([_csv_cell(data[column]) for column in columns])
    return buffer.getvalue()


def render_json(rows: list[ReportRow]) -> str:
    columns = columns_for(rows)
    objects = []
    for row in rows:
        data = row.model_dump()
        fields = ", ".join(f"{json.dumps(c)}: {_json_value(data[c])}" for c in columns)
        objects.append("  {" + fields + "}")
    if not objects:
        return "[]\n"
    return "[\n" + ",\n".join(objects) + "\n]\n"


def render(rows: list[ReportRow], fmt: OutputFormat) -> str:
    return render_csv(rows) if fmt == OutputFormat.CSV else render_json(rows)


def write_report(rows: list[ReportRow], fmt: OutputFormat, out_path: Path | None) -> str:
    """Render rows and write them to out_path when given; returns the rendered text."""
    text = render(rows, fmt)
    if out_path is not None:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text, encoding="utf-8")
    return text


def property_row(result: PropertyResult, seed: int) -> ReportRow:
    """Table row for a verification property; p and q do not apply and are nan."""
    scale = abs(result.expected)
    rel_err = result.abs_err / scale if scale > 0 else result.abs_err
    return ReportRow(
        quantity=f"{result.suite}.{result.name}",
        n=result.n,
        p=math.nan,
        q=math.nan,
        closed_form=result.expected,
        numeric=result.measured,
        abs_err=result.abs_err,
        rel_err=rel_err,
        samples=result.samples,
        seed=seed,
        passed=result.passed,
    )
