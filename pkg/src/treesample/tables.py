"""Minimal tabular container for study results, serialized to CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class StudyTable:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def append(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} cells, expected {len(self.columns)}")
        self.rows.append(tuple(values))

    def to_csv_text(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(cell) for cell in row])
        return buffer.getvalue()

    def write_csv(self, path: Path | str) -> None:
        Path(path).write_text(self.to_csv_text())


__all__ = ["StudyTable"]
