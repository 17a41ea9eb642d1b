"""Storage layer for unscathed results."""

import json
from pathlib import Path
from typing import Iterable, List

from pydantic import ValidationError as PydanticValidationError

from .exceptions import StorageError
from .models import ResultRecord
from .regions import catalog_document


class ResultStore:
    """Append-only JSON-lines file of computed results."""

    def __init__(self, path: Path):
        self.path = Path(path)

    def _ensure_directory(self) -> None:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise StorageError(f"Failed to create results directory: {e}")

    def load(self) -> List[ResultRecord]:
        """Load every stored record in file order.

        Raises:
            StorageError: on unreadable files or malformed lines.
        """
        if not self.path.exists():
            return []

        records = []
        try:
            with open(self.path, "r", encoding="utf-8") as f:
                for number, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        records.append(ResultRecord.model_validate_json(line))
                    except PydanticValidationError as e:
                        raise StorageError(f"Malformed record on line {number} of {self.path}: {e}")
        except OSError as e:
            raise StorageError(f"Failed to load results: {e}")
        return records

    def append(self, records: Iterable[ResultRecord]) -> int:
        """Append records; returns how many were written."""
        self._ensure_directory()
        written = 0
        try:
            with open(self.path, "a", encoding="utf-8") as f:
                for record in records:
                    f.write(record.model_dump_json() + "\n")
                    written += 1
        except OSError as e:
            raise StorageError(f"Failed to save results: {e}")
        return written


def export_catalog(path: Path) -> None:
    """Write the region catalog as a JSON document."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(catalog_document(), f, indent=2, sort_keys=True)
    except OSError as e:
        raise StorageError(f"Failed to write catalog: {e}")
