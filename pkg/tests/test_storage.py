import json

import pytest

from unscathed.exceptions import StorageError
from unscathed.models import RecordMetadata, ResultRecord
from unscathed.storage import ResultStore, export_catalog


def _record(quantity="P", value=0.284):
    return ResultRecord(
        quantity=quantity,
        method="mc-simulation",
        value=value,
        uncertainty=1e-4,
        uncertainty_kind="1σ",
        metadata=RecordMetadata(seed=7, samples=1000),
    )


def test_missing_file_loads_empty(tmp_path):
    assert ResultStore(tmp_path / "results.jsonl").load() == []


def test_append_then_load_in_order(tmp_path):
    store = ResultStore(tmp_path / "nested" / "results.jsonl")
    assert store.append([_record("P"), _record("c2", 0.3166)]) == 2
    assert store.append([_record("P", 0.285)]) == 1
    loaded = store.load()
    assert [r.quantity for r in loaded] == ["P", "c2", "P"]
    assert loaded[2].value == 0.285
    assert loaded[0].metadata.seed == 7


def test_blank_lines_are_skipped(tmp_path):
    path = tmp_path / "results.jsonl"
    path.write_text("\n" + _record().model_dump_json() + "\n\n", encoding="utf-8")
    assert len(ResultStore(path).load()) == 1


def test_malformed_line_names_its_number(tmp_path):
    path = tmp_path / "results.jsonl"
    path.write_text(_record().model_dump_json() + "\n{not json}\n", encoding="utf-8")
    with pytest.raises(StorageError, match="line 2"):
        ResultStore(path).load()


def test_export_catalog(tmp_path):
    path = tmp_path / "catalog.json"
    export_catalog(path)
    document = json.loads(path.read_text(encoding="utf-8"))
    assert len(document) == 12
    assert document[0]["name"] == "(I,IV)"
    assert document[0]["multiplicity"] == 2
