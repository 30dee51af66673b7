"""Tabular core: immutable tables, CSV ingestion, kind inference, persistence.

Tables are column oriented. Every cell is kept as its raw text; nothing is
coerced at ingestion time. Each column carries a coarse kind (numeric, date
or text) inferred from its cells, which downstream stages use to decide
which similarity signals apply.
"""

from __future__ import annotations

import csv
import io
import json
import re
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CsvParseError, EmptyTableError, ProjectNotFoundError, UsageError


class ColumnKind(str, Enum):
    NUMERIC = "numeric"
    DATE = "date"
    TEXT = "text"


# Decimal numbers: optional sign, optional thousands separators, at most one
# decimal point. "1,234.56" and "-17" qualify; "1.2.3" and "1,23" do not.
_NUMBER_RE = re.compile(r"^[+-]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?$")

_DATE_FORMATS = ("%Y-%m-%d", "%d/%m/%Y", "%m/%d/%Y")

# Fraction of non-empty cells that must agree before a column leaves TEXT.
KIND_THRESHOLD = 0.9


def is_numeric_text(text: str) -> bool:
    return bool(_NUMBER_RE.match(text.strip()))


def parse_numeric(text: str) -> float:
    """Parse a cell that satisfies the numeric grammar. UsageError otherwise."""
    stripped = text.strip()
    if not _NUMBER_RE.match(stripped):
        raise UsageError(f"not a numeric cell: {text!r}")
    return float(stripped.replace(",", ""))


def is_date_text(text: str) -> bool:
    stripped = text.strip()
    for fmt in _DATE_FORMATS:
        try:
            datetime.strptime(stripped, fmt)
            return True
        except ValueError:
            continue
    return False


@dataclass(frozen=True)
class Column:
    """One table column: position, optional header, raw cells, inferred kind."""

    position: int
    header: str | None
    cells: tuple[str, ...]
    kind: ColumnKind

    def __post_init__(self) -> None:
        if self.position < 0:
            raise UsageError("column position must be non-negative")
        if self.header is not None and not self.header.strip():
            raise UsageError("header must be None or non-blank")


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[Column, ...]
    row_count: int

    def __post_init__(self) -> None:
        for i, col in enumerate(self.columns):
            if col.position != i:
                raise UsageError("column positions must be contiguous from 0")
            if len(col.cells) != self.row_count:
                raise UsageError("all columns must have row_count cells")

    @property
    def headers(self) -> list[str | None]:
        return [c.header for c in self.columns]

    def rows(self) -> list[list[str]]:
        return [[c.cells[r] for c in self.columns] for r in range(self.row_count)]

    @classmethod
    def build(
        cls,
        name: str,
        headers: Sequence[str | None],
        rows: Sequence[Sequence[str]],
        kinds: Sequence[ColumnKind] | None = None,
    ) -> "Table":
        """Assemble a table from row-major data, inferring kinds if not given."""
        n_cols = len(headers)
        for row in rows:
            if len(row) != n_cols:
                raise UsageError("rows must match header width")
        columns = []
        for i in range(n_cols):
            cells = tuple(row[i] for row in rows)
            kind = kinds[i] if kinds is not None else infer_kind_of_cells(cells)
            header = headers[i]
            if header is not None:
                header = header.strip() or None
            columns.append(Column(position=i, header=header, cells=cells, kind=kind))
        return cls(name=name, columns=tuple(columns), row_count=len(rows))


def infer_kind_of_cells(cells: Iterable[str]) -> ColumnKind:
    """Classify cells as numeric, date or text by supermajority.

    A column is numeric (or date) when at least 90% of its non-empty cells
    parse under that interpretation. Columns with no non-empty cells are text.
    """
    non_empty = [c for c in cells if c.strip()]
    if not non_empty:
        return ColumnKind.TEXT
    total = len(non_empty)
    numeric = sum(1 for c in non_empty if is_numeric_text(c))
    # integer comparison avoids float threshold wobble: n/total >= 0.9
    if numeric * 10 >= total * 9:
        return ColumnKind.NUMERIC
    dates = sum(1 for c in non_empty if is_date_text(c))
    if dates * 10 >= total * 9:
        return ColumnKind.DATE
    return ColumnKind.TEXT


def infer_column_kind(column: Column) -> ColumnKind:
    return infer_kind_of_cells(column.cells)


def load_table(data: bytes, has_header: bool = True, name: str = "") -> Table:
    """Parse UTF-8 RFC 4180 CSV bytes into a Table.

    Ragged rows are padded with empty cells to the widest record. A blank
    header cell leaves that column unnamed. Raises CsvParseError for bytes
    that are not UTF-8 or not well-formed CSV, EmptyTableError when there
    are no records at all.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CsvParseError(f"input is not UTF-8: {exc}") from exc
    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    records: list[list[str]] = []
    try:
        for record in reader:
            records.append(record)
    except csv.Error as exc:
        raise CsvParseError(str(exc), line=reader.line_num) from exc
    if not records:
        raise EmptyTableError("no CSV records in input")

    width = max(len(r) for r in records)
    padded = [r + [""] * (width - len(r)) for r in records]
    if has_header:
        raw_headers, data_rows = padded[0], padded[1:]
        headers: list[str | None] = [h if h.strip() else None for h in raw_headers]
    else:
        headers = [None] * width
        data_rows = padded
    return Table.build(name=name, headers=headers, rows=data_rows)


def table_to_csv(table: Table) -> bytes:
    """Serialize a table back to UTF-8 CSV, header row first.

    Unnamed columns serialize as empty header cells, so a round trip through
    load_table preserves the table exactly.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["" if h is None else h for h in table.headers])
    writer.writerows(table.rows())
    return buf.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# persistence


def table_to_document(table: Table) -> dict:
    return {
        "name": table.name,
        "headers": table.headers,
        "kinds": [c.kind.value for c in table.columns],
        "rows": table.rows(),
    }


def table_from_document(doc: dict) -> Table:
    try:
        name = doc["name"]
        headers = doc["headers"]
        kinds = [ColumnKind(k) for k in doc["kinds"]]
        rows = doc["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed project document: {exc}") from exc
    return Table.build(name=name, headers=headers, rows=rows, kinds=kinds)


class ProjectStore:
    """Directory-backed store of tables, one JSON document per project id.

    Writes are serialized under a lock so concurrent saves cannot interleave;
    ids are random and never reused.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, project_id: str) -> Path:
        if not re.fullmatch(r"[0-9a-f]{12}", project_id):
            raise ProjectNotFoundError(f"unknown project id: {project_id!r}")
        return self.root / f"{project_id}.json"

    def save(self, table: Table) -> str:
        project_id = uuid.uuid4().hex[:12]
        payload = json.dumps(table_to_document(table), ensure_ascii=False, indent=2)
        with self._lock:
            self._path(project_id).write_text(payload, encoding="utf-8")
        return project_id

    def load(self, project_id: str) -> Table:
        path = self._path(project_id)
        if not path.exists():
            raise ProjectNotFoundError(f"unknown project id: {project_id!r}")
        with self._lock:
            doc = json.loads(path.read_text(encoding="utf-8"))
        return table_from_document(doc)

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))
