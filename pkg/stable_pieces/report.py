import io
import json
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str.__str__(self)

        def __format__(self, format_spec: str) -> str:
            return str.__format__(str(self), format_spec)
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import BaseModel, Field
from rich.console import Console
from rich.table import Table


class ReportFormat(StrEnum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class Report(BaseModel):
    """Output of one command.

    ``payload`` is the JSON document; ``rows`` is the flat table used by the
    text and CSV renderings. Neither carries timestamps or ids, so the same
    configuration always renders to the same bytes.
    """

    command: str
    title: str
    payload: dict[str, Any] = Field(default_factory=dict)
    rows: list[dict[str, Any]] = Field(default_factory=list)
    columns: list[str] | None = None
    footer: list[str] = Field(default_factory=list)
    passed: bool = True

    def _columns(self) -> list[str]:
        if self.columns is not None:
            return self.columns
        return list(self.rows[0]) if self.rows else []

    def to_json(self) -> str:
        return json.dumps(self.payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        frame = pd.DataFrame(self.rows, columns=self._columns())
        return frame.to_csv(index=False, lineterminator="\n")

    def to_text(self) -> str:
        table = Table(title=self.title)
        columns = self._columns()
        for column in columns:
            table.add_column(column)
        for row in self.rows:
            table.add_row(*(str(row.get(column, "")) for column in columns))
        buffer = io.StringIO()
        console = Console(file=buffer, width=160, color_system=None)
        console.print(table)
        for line in self.footer:
            console.print(line, highlight=False)
        return buffer.getvalue()

    def render(self, fmt: ReportFormat) -> str:
        match fmt:
            case ReportFormat.JSON:
                return self.to_json()
            case ReportFormat.CSV:
                return self.to_csv()
            case _:
                return self.to_text()

    def write(self, fmt: ReportFormat, path: Path | None = None) -> str:
        """Render, and write to ``path`` when given; returns the rendering."""
        text = self.render(fmt)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        return text
