"""
Report: JSON and CSV Emission of Run Records

JSON reports are the full record document (schema "1"). CSV reports are the
plot-ready long format: one row per (seed, kappa, r, s, quantity) cell with
the fixed column order CSV_COLUMNS.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

from .errors import InvalidInputError
from .store import SCHEMA_VERSION, RunRecord

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "run_id",
    "seed",
    "kappa",
    "r",
    "s",
    "quantity",
    "value",
    "samples",
    "unreliable",
    "near_cutoff",
)
FORMATS = ("json", "csv")


def csv_rows(record: RunRecord) -> list[dict]:
    """Long-format rows of every table in the record, seeds in ascending order."""
    rows = []
    for seed in sorted(record.tables):
        for cell in record.tables[seed]:
            rows.append(
                {
                    "run_id": record.run_id,
                    "seed": seed,
                    "kappa": cell["kappa"],
                    "r": "" if cell["r"] is None else cell["r"],
                    "s": "" if cell["s"] is None else cell["s"],
                    "quantity": cell["quantity"],
                    "value": repr(float(cell["value"])),
                    "samples": cell["samples"],
                    "unreliable": int(bool(cell["unreliable"])),
                    "near_cutoff": int(bool(cell["near_cutoff"])),
                }
            )
    return rows


def emit_report(record: RunRecord, fmt: str = "json", out_dir: str | Path = "reports") -> Path:
    """
    Write one record as a JSON document or a CSV table.

    Args:
        record: Complete or partial run record
        fmt: "json" or "csv"
        out_dir: Directory for the file, created if missing

    Returns:
        Path of the written file, ``<out_dir>/<run_id>.<fmt>``

    Raises:
        InvalidInputError: Unknown format or unwritable path
    """
    if fmt not in FORMATS:
        raise InvalidInputError(f"unknown report format {fmt!r}; choose from {FORMATS}")
    path = Path(out_dir) / f"{record.run_id}.{fmt}"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "json":
            path.write_text(json.dumps(record.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        else:
            with path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
                writer.writeheader()
                writer.writerows(csv_rows(record))
    except OSError as exc:
        raise InvalidInputError(f"cannot write report to {path}: {exc}") from exc
    logger.info("wrote %s report %s", fmt, path)
    return path


def read_json_report(path: str | Path) -> RunRecord:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("schema_version") != SCHEMA_VERSION:
        raise InvalidInputError(f"{path}: unsupported schema {data.get('schema_version')!r}")
    return RunRecord.from_dict(data)


def read_csv_report(path: str | Path) -> list[dict]:
    """Parse a CSV report back into typed rows."""
    rows = []
    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise InvalidInputError(f"{path}: unexpected columns {reader.fieldnames}")
        for row in reader:
            rows.append(
                {
                    "run_id": row["run_id"],
                    "seed": int(row["seed"]),
                    "kappa": int(row["kappa"]),
                    "r": None if row["r"] == "" else int(row["r"]),
                    "s": None if row["s"] == "" else int(row["s"]),
                    "quantity": row["quantity"],
                    "value": float(row["value"]),
                    "samples": int(row["samples"]),
                    "unreliable": row["unreliable"] == "1",
                    "near_cutoff": row["near_cutoff"] == "1",
                }
            )
    return rows


def summary_lines(record: RunRecord) -> list[str]:
    """Human-readable verdict summary for the CLI."""
    lines = [
        "=" * 60,
        f"Run {record.run_id}: {record.status} (exit code {record.exit_code})",
        "=" * 60,
    ]
    if "q" in record.solver:
        lines.append(
            f"Window (p, q) = ({record.solver.get('p')}, {record.solver.get('q')}), "
            f"residual {record.solver['residual']:.2e}"
        )
    report = record.report
    if report is not None:
        lo, hi = report["kappa_range"]
        lines.append(f"kappa range [{lo}, {hi}], holes {report['holes'] or 'none'}")
        for number, verdict in report["criteria"].items():
            lines.append(f"  Criterion {number}: {verdict}")
        threshold = report["thresholds"]["r_threshold"]
        lines.append(f"  R_kappa (grad1 <= {threshold:.3e}): {report['r_verdict']}")
        anchors = report.get("anchors") or {}
        if anchors:
            fitted = ", ".join(
                f"{name} " + ("n/a" if value is None else f"{value:.3e}") for name, value in anchors.items()
            )
            lines.append(f"  fitted at kappa {lo}: {fitted}")
        lines.append(f"  {'kappa':>5} {'grad1':>12} {'R':>6} {'S':>6} {'T':>6}")
        for row in report["rows"]:
            grad1 = "n/a" if row["grad1"] is None else f"{row['grad1']:.3e}"
            flags = " ".join(f"{str(row[key]):>6}" for key in ("R", "S", "T"))
            lines.append(f"  {row['kappa']:>5} {grad1:>12} {flags}")
        for name, envelope in report["envelopes"].items():
            constant = "n/a" if envelope["constant"] is None else f"{envelope['constant']:.3e}"
            lines.append(f"  {name:>8} = {constant:>10}  {envelope['verdict']} ({envelope['reason']})")
    for error in record.errors:
        lines.append(f"  [{error['stage']}] {error['error']}: {error['message']}")
    return lines
