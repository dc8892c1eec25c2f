import asyncio
import json

import pytest

from chibound.core.errors import InvalidInputError
from chibound.core.report_store import JsonlReportStore, read_jsonl, write_records
from chibound.models.schemas import ViolationRecord


def _record(i: int) -> ViolationRecord:
    return ViolationRecord(check="bound", graph6="Dhc", n=5, detail={"index": i})


def test_store_creates_parent_directories(tmp_path):
    store = JsonlReportStore(tmp_path / "a" / "b" / "run.jsonl")
    assert store.path.parent.is_dir()
    assert asyncio.run(store.read_lines()) == []


def test_append_keeps_order(tmp_path):
    store = JsonlReportStore(tmp_path / "run.jsonl")

    async def fill():
        await store.append_many([_record(0)])
        await store.append_many([_record(1), _record(2)])
        return await store.read_lines()

    lines = asyncio.run(fill())
    assert [json.loads(line)["detail"]["index"] for line in lines] == [0, 1, 2]


def test_write_records_replaces_the_file(tmp_path):
    path = tmp_path / "run.jsonl"
    assert write_records(path, [_record(0), _record(1)]) == 2
    assert write_records(path, [_record(7)]) == 1
    (line,) = path.read_text().splitlines()
    assert ViolationRecord.model_validate_json(line) == _record(7)


def test_read_jsonl_returns_written_lines(tmp_path):
    path = tmp_path / "run.jsonl"
    write_records(path, [_record(0), _record(1)])
    assert [json.loads(line)["detail"]["index"] for line in read_jsonl(path)] == [0, 1]


def test_read_jsonl_needs_an_existing_utf8_file(tmp_path):
    with pytest.raises(InvalidInputError, match="no such file"):
        read_jsonl(tmp_path / "missing" / "run.jsonl")
    assert not (tmp_path / "missing").exists()

    path = tmp_path / "bad.jsonl"
    path.write_bytes(b'{"type": "\xff"}\n')
    with pytest.raises(InvalidInputError, match="not valid UTF-8"):
        read_jsonl(path)
