"""
Store: Run Records and the Append-Only Record Store

A RunRecord is the self-contained result of one ExperimentConfig: the config
snapshot, timestamps, library versions, the per-seed distortion tables, the
criterion report, solver diagnostics and any captured stage errors. Records
are appended as JSON lines to ``<store>.jsonl``; a sidecar
``<store>.index.jsonl`` maps config hashes to line numbers so sweeps can resume.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from .config import ExperimentConfig
from .distortion import DistortionTable
from .errors import InvalidInputError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
TIMESTAMP_KEYS = ("started", "finished")


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def library_versions() -> dict[str, str]:
    """Versions of the package and its numerical stack."""
    import mpmath
    import numpy
    import scipy

    from . import __version__

    return {
        "kam_criteria": __version__,
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "mpmath": mpmath.__version__,
    }


@dataclass
class RunRecord:
    """
    Everything a run produced; re-runnable from ``config`` alone.

    Attributes:
        config: Config snapshot (all keys)
        config_hash: SHA-256 of the canonical config
        status: "complete", "partial", "rejected" or "failed"
        exit_code: 0 success, 1 violated verdict, 2 infeasible config, 3 internal error
        started, finished: UTC timestamps
        versions: Library versions at run time
        tables: seed -> DistortionTable rows
        report: CriterionReport as a dict, None when evaluation did not run
        solver: Window solve diagnostics
        errors: Captured failures as {stage, error, message}
    """

    config: dict[str, Any]
    config_hash: str
    status: str = "complete"
    exit_code: int = 0
    started: str = ""
    finished: str = ""
    versions: dict[str, str] = field(default_factory=dict)
    tables: dict[int, list[dict]] = field(default_factory=dict)
    report: dict[str, Any] | None = None
    solver: dict[str, Any] = field(default_factory=dict)
    errors: list[dict[str, str]] = field(default_factory=list)

    @classmethod
    def for_config(cls, config: ExperimentConfig) -> RunRecord:
        return cls(
            config=config.to_dict(),
            config_hash=config.config_hash,
            started=utc_now(),
            versions=library_versions(),
        )

    @property
    def run_id(self) -> str:
        return self.config_hash[:12]

    @property
    def experiment_config(self) -> ExperimentConfig:
        return ExperimentConfig.from_dict(self.config)

    def add_error(self, stage: str, exc: BaseException) -> None:
        self.errors.append({"stage": stage, "error": type(exc).__name__, "message": str(exc)})

    def table(self, seed: int) -> DistortionTable:
        return DistortionTable.from_rows(self.tables.get(seed, []))

    def merged_table(self) -> DistortionTable:
        merged = DistortionTable()
        for seed in sorted(self.tables):
            merged = merged.merge(self.table(seed))
        return merged

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "run_id": self.run_id,
            "config": self.config,
            "config_hash": self.config_hash,
            "status": self.status,
            "exit_code": self.exit_code,
            "started": self.started,
            "finished": self.finished,
            "versions": self.versions,
            "tables": {str(seed): rows for seed, rows in sorted(self.tables.items())},
            "report": self.report,
            "solver": self.solver,
            "errors": self.errors,
        }

    def payload(self) -> dict[str, Any]:
        """The record without timestamps; identical configs give identical payloads."""
        data = self.to_dict()
        for key in TIMESTAMP_KEYS:
            data.pop(key)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunRecord:
        if data.get("schema_version") != SCHEMA_VERSION:
            raise InvalidInputError(f"unsupported record schema {data.get('schema_version')!r}")
        return cls(
            config=data["config"],
            config_hash=data["config_hash"],
            status=data["status"],
            exit_code=int(data["exit_code"]),
            started=data.get("started", ""),
            finished=data.get("finished", ""),
            versions=data.get("versions", {}),
            tables={int(seed): rows for seed, rows in data.get("tables", {}).items()},
            report=data.get("report"),
            solver=data.get("solver", {}),
            errors=data.get("errors", []),
        )


class RecordStore:
    """
    Append-only JSON-lines store with a config-hash index. Single writer.

    Example:
        >>> store = RecordStore("runs/records")
        >>> if store.lookup(config) is None:
        ...     store.append(run_criteria(config))
    """

    def __init__(self, path: str | Path):
        base = Path(path)
        self.records_path = base.with_name(base.name + ".jsonl")
        self.index_path = base.with_name(base.name + ".index.jsonl")
        self._index: dict[str, tuple[str, int]] | None = None

    def _load_index(self) -> dict[str, tuple[str, int]]:
        if self._index is None:
            self._index = {}
            if self.index_path.exists():
                with self.index_path.open(encoding="utf-8") as handle:
                    for line in handle:
                        if line.strip():
                            entry = json.loads(line)
                            self._index[entry["hash"]] = (entry["config"], int(entry["line"]))
        return self._index

    def __len__(self) -> int:
        if not self.records_path.exists():
            return 0
        with self.records_path.open(encoding="utf-8") as handle:
            return sum(1 for line in handle if line.strip())

    def __contains__(self, config: ExperimentConfig) -> bool:
        return self.line_of(config) is not None

    def line_of(self, config: ExperimentConfig) -> int | None:
        """Line of the record for this config; a hash hit must also match the canonical JSON."""
        entry = self._load_index().get(config.config_hash)
        if entry is None:
            return None
        canonical, line = entry
        if canonical != config.canonical_json():
            logger.warning("config hash %s matches a different config; ignoring", config.config_hash[:12])
            return None
        return line

    def lookup(self, config: ExperimentConfig) -> RunRecord | None:
        line = self.line_of(config)
        return None if line is None else self.load(line)

    def load(self, line: int) -> RunRecord:
        with self.records_path.open(encoding="utf-8") as handle:
            for number, text in enumerate(handle):
                if number == line:
                    return RunRecord.from_dict(json.loads(text))
        raise InvalidInputError(f"{self.records_path} has no line {line}")

    def records(self) -> Iterator[RunRecord]:
        if not self.records_path.exists():
            return
        with self.records_path.open(encoding="utf-8") as handle:
            for text in handle:
                if text.strip():
                    yield RunRecord.from_dict(json.loads(text))

    def append(self, record: RunRecord, config: ExperimentConfig | None = None) -> int:
        """Append a record and index it; returns its line number."""
        config = config or record.experiment_config
        self.records_path.parent.mkdir(parents=True, exist_ok=True)
        line = len(self)
        with self.records_path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
        with self.index_path.open("a", encoding="utf-8") as handle:
            entry = {"hash": record.config_hash, "config": config.canonical_json(), "line": line}
            handle.write(json.dumps(entry, sort_keys=True) + "\n")
        self._load_index()[record.config_hash] = (config.canonical_json(), line)
        logger.info("record %s appended at line %d of %s", record.run_id, line, self.records_path)
        return line
