#!/usr/bin/env python3

import csv
import json
import logging
import math
import os
from typing import Any, Optional

from helpers import SECTION_TITLES, format_bindings, format_complex, format_duration, section_of
from models import EvalResult, Report, VerificationRecord

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "markdown")
CSV_HEADER = [
    "identity_id", "provenance", "sample", "status",
    "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff", "rel_diff", "time_ms",
]


def _real(x: float) -> Optional[float]:
    """JSON has no NaN or infinity; non-finite values are written as null."""
    x = float(x)
    return x if math.isfinite(x) else None


def _complex(z: complex) -> dict[str, Optional[float]]:
    z = complex(z)
    return {"re": _real(z.real), "im": _real(z.imag)}


def _eval_result(result: EvalResult) -> dict[str, Any]:
    return {
        "value": _complex(result.value),
        "abs_err": _real(result.abs_err),
        "terms_used": result.terms_used,
        "converged": result.converged,
        "diagnostics": list(result.diagnostics),
    }


def record_to_dict(record: VerificationRecord) -> dict[str, Any]:
    """Every VerificationRecord field, with complex numbers as {re, im}."""
    return {
        "identity_id": record.identity_id,
        "provenance": record.provenance,
        "sample_index": record.sample_index,
        "sample_point": {name: _complex(value) for name, value in record.sample_point.items()},
        "lhs": _eval_result(record.lhs),
        "rhs": _eval_result(record.rhs),
        "abs_diff": _real(record.abs_diff),
        "rel_diff": _real(record.rel_diff),
        "status": record.status,
        "expected_status": record.expected_status,
        "wall_time_ms": round(record.wall_time_ms, 3),
        "message": record.message,
    }


def _save_json(report: Report, path: str) -> None:
    payload = {
        "config": report.config,
        "summary": report.summary,
        "records": [record_to_dict(record) for record in report.records],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, ensure_ascii=False)


def _save_csv(report: Report, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER)
        for r in report.records:
            w.writerow([
                r.identity_id,
                r.provenance,
                r.sample_index,
                r.status,
                repr(r.lhs.value.real),
                repr(r.lhs.value.imag),
                repr(r.rhs.value.real),
                repr(r.rhs.value.imag),
                f"{r.abs_diff:.6e}",
                f"{r.rel_diff:.6e}",
                f"{r.wall_time_ms:.3f}",
            ])


def _markdown_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def _save_markdown(report: Report, path: str) -> None:
    grouped: dict[str, list[VerificationRecord]] = {section: [] for section in SECTION_TITLES}
    for record in report.records:
        grouped.setdefault(section_of(record.provenance), []).append(record)

    lines = ["# Identity verification report", ""]
    summary = report.summary
    counts = summary.get("entry_counts", {})
    lines.append(f"{summary.get('entries', 0)} identities, {summary.get('records', 0)} sample points, "
                 f"total time {format_duration(summary.get('total_time_ms', 0.0))}.")
    lines.append("")
    lines.append("| Status | Identities |")
    lines.append("|---|---|")
    for status, count in counts.items():
        lines.append(f"| {status} | {count} |")
    lines.append("")

    for section, records in grouped.items():
        title = SECTION_TITLES.get(section, f"Other ({section})")
        lines.append(f"## {title}")
        lines.append("")
        if not records:
            lines.append("No entries.")
            lines.append("")
            continue
        lines.append("| Provenance | Identity | Sample | Status | LHS | RHS | rel. diff | Note |")
        lines.append("|---|---|---|---|---|---|---|---|")
        for r in records:
            rel = "-" if math.isnan(r.rel_diff) else f"{r.rel_diff:.2e}"
            lines.append(
                f"| {r.provenance} | {_markdown_cell(r.identity_id)} | {_markdown_cell(format_bindings(r.sample_point))} "
                f"| {r.status} | {format_complex(r.lhs.value, 10)} | {format_complex(r.rhs.value, 10)} "
                f"| {rel} | {_markdown_cell(r.message)} |"
            )
        lines.append("")

    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines))


def emit_report(report: Report, report_format: str, path: str) -> None:
    """
    Write a report as json, csv or markdown.

    Args:
        report: Completed verification run
        report_format: One of FORMATS
        path: Output file; its directory is created if missing

    Raises:
        ValueError: Unknown format
        OSError: If the path cannot be written
    """
    writers = {"json": _save_json, "csv": _save_csv, "markdown": _save_markdown}
    if report_format not in writers:
        raise ValueError(f"Unknown report format {report_format!r}; expected one of {', '.join(FORMATS)}")
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        writers[report_format](report, path)
    except OSError as e:
        logger.error(f"Failed to write {report_format} report to {path}: {e}")
        raise
    logger.info(f"{report_format} report with {len(report.records)} records saved to: {path}")
