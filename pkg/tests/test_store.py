"""
Unit tests for run records and the append-only record store.
"""

import json

import pytest
from conftest import requires_kam_criteria


def _record(config, value=0.25):
    """Hand-filled record with one table for seed 0."""
    from kam_criteria.distortion import DistortionTable
    from kam_criteria.store import RunRecord

    table = DistortionTable()
    table.put("Lambda_II", 5, 1.05, seed=0)
    table.put("grad1", 5, value, seed=0, r=7)
    record = RunRecord.for_config(config)
    record.tables = {0: table.to_rows()}
    return record


@requires_kam_criteria
class TestRunRecord:
    """Tests for RunRecord."""

    def test_identity(self, small_config):
        """Test the record is keyed by the config hash."""
        record = _record(small_config)

        assert record.config_hash == small_config.config_hash
        assert record.run_id == small_config.config_hash[:12]
        assert record.experiment_config == small_config
        assert set(record.versions) == {"kam_criteria", "numpy", "scipy", "mpmath"}

    def test_dict_round_trip(self, small_config):
        """Test a record survives JSON serialisation."""
        from kam_criteria.store import RunRecord

        record = _record(small_config)
        record.add_error("tabulate", ValueError("boom"))

        restored = RunRecord.from_dict(json.loads(json.dumps(record.to_dict())))

        assert restored.to_dict() == record.to_dict()
        assert restored.errors == [{"stage": "tabulate", "error": "ValueError", "message": "boom"}]
        assert restored.table(0).get("grad1", 5, 7) == 0.25

    def test_schema_mismatch(self, small_config):
        """Test records of another schema version are refused."""
        from kam_criteria.errors import InvalidInputError
        from kam_criteria.store import RunRecord

        data = _record(small_config).to_dict()
        data["schema_version"] = "0"

        with pytest.raises(InvalidInputError):
            RunRecord.from_dict(data)

    def test_payload_drops_timestamps(self, small_config):
        """Test payloads of the same config agree whatever the run time."""
        first = _record(small_config)
        second = _record(small_config)
        second.started = "2000-01-01T00:00:00+00:00"

        assert "started" not in first.payload()
        assert first.payload() == second.payload()

    def test_merged_table(self, small_config):
        """Test per-seed tables merge cell-wise."""
        from kam_criteria.distortion import DistortionTable

        record = _record(small_config)
        other = DistortionTable()
        other.put("grad1", 5, 0.5, seed=1, r=7)
        record.tables[1] = other.to_rows()

        merged = record.merged_table()

        assert merged.get("grad1", 5, 7) == 0.5
        assert merged.cell("grad1", 5, 7).seed == 1


@requires_kam_criteria
class TestRecordStore:
    """Tests for RecordStore."""

    def test_empty_store(self, tmp_store, small_config):
        """Test a fresh store holds nothing."""
        assert len(tmp_store) == 0
        assert small_config not in tmp_store
        assert tmp_store.lookup(small_config) is None
        assert list(tmp_store.records()) == []

    def test_append_and_lookup(self, tmp_store, small_config):
        """Test appended records are found by config."""
        first = small_config
        second = small_config.replace(eps=0.4)

        assert tmp_store.append(_record(first)) == 0
        assert tmp_store.append(_record(second, 0.5)) == 1

        assert len(tmp_store) == 2
        assert first in tmp_store
        assert tmp_store.line_of(second) == 1
        assert tmp_store.lookup(second).table(0).get("grad1", 5, 7) == 0.5
        assert [r.run_id for r in tmp_store.records()] == [
            first.config_hash[:12],
            second.config_hash[:12],
        ]

    def test_index_persists(self, tmp_store, small_config):
        """Test a new store instance reads the index written by another."""
        from kam_criteria.store import RecordStore

        tmp_store.append(_record(small_config))
        reopened = RecordStore(tmp_store.records_path.with_suffix(""))

        assert reopened.index_path.exists()
        assert small_config in reopened
        assert reopened.lookup(small_config).run_id == small_config.config_hash[:12]

    def test_runtime_keys_resume(self, tmp_store, small_config):
        """Test a config differing only in workers resolves to the stored record."""
        tmp_store.append(_record(small_config))

        assert small_config.replace(workers=4) in tmp_store

    def test_missing_line(self, tmp_store, small_config):
        """Test loading past the end is refused."""
        from kam_criteria.errors import InvalidInputError

        tmp_store.append(_record(small_config))

        with pytest.raises(InvalidInputError):
            tmp_store.load(5)
