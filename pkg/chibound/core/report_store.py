"""JSONL record sink using aiofiles for async appends."""

import asyncio
import logging
from pathlib import Path
from typing import Iterable

import aiofiles
from pydantic import BaseModel

from chibound.core.errors import InvalidInputError

logger = logging.getLogger(__name__)


class JsonlReportStore:
    """Append-only JSON Lines file; one record per line, one write per record."""

    def __init__(self, path: str | Path):
        """Initialize the store, creating parent directories."""
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        logger.info(f"Report store initialized at {self.path}")

    @staticmethod
    def to_line(record: BaseModel) -> str:
        return record.model_dump_json() + "\n"

    async def reset(self) -> None:
        """Truncate the file."""
        async with aiofiles.open(self.path, "w", encoding="utf-8") as f:
            await f.write("")

    async def append_many(self, records: Iterable[BaseModel]) -> int:
        """Append records in order; returns how many were written."""
        written = 0
        try:
            async with aiofiles.open(self.path, "a", encoding="utf-8") as f:
                for record in records:
                    await f.write(self.to_line(record))
                    written += 1
        except OSError as e:
            logger.error(f"Error appending to {self.path}: {e}")
            raise
        logger.debug(f"Appended {written} records to {self.path}")
        return written

    async def read_lines(self) -> list[str]:
        """All lines of the file; empty when it does not exist."""
        if not self.path.exists():
            return []
        async with aiofiles.open(self.path, "r", encoding="utf-8") as f:
            content = await f.read()
        return content.splitlines()


def write_records(path: str | Path, records: Iterable[BaseModel]) -> int:
    """Replace path with the given records (blocking wrapper for campaign code)."""
    store = JsonlReportStore(path)

    async def _write() -> int:
        await store.reset()
        return await store.append_many(records)

    return asyncio.run(_write())


def read_jsonl(path: str | Path) -> list[str]:
    """Lines of an existing JSONL report (blocking wrapper)."""
    path = Path(path)
    if not path.is_file():
        raise InvalidInputError(f"cannot read {path}: no such file")
    try:
        return asyncio.run(JsonlReportStore(path).read_lines())
    except UnicodeDecodeError as e:
        raise InvalidInputError(f"{path} is not valid UTF-8: {e.reason} at byte {e.start}") from e
