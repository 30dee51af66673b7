"""Tables, CSV ingestion, kind inference, and the project store."""

from __future__ import annotations

import pytest

from typematch.errors import (
    CsvParseError,
    EmptyTableError,
    ProjectNotFoundError,
    UsageError,
)
from typematch.tabular import (
    Column,
    ColumnKind,
    ProjectStore,
    Table,
    infer_kind_of_cells,
    is_date_text,
    is_numeric_text,
    load_table,
    parse_numeric,
    table_from_document,
    table_to_csv,
    table_to_document,
)


# ---------------------------------------------------------------------------
# cell grammars


@pytest.mark.parametrize(
    "text",
    ["0", "42", "-17", "+3", "3.14", "1,234", "1,234.56", "  7 ", "12,345,678"],
)
def test_numeric_text_accepts(text: str) -> None:
    assert is_numeric_text(text)


@pytest.mark.parametrize(
    "text",
    ["", " ", "n/a", "1.2.3", "1,23", "12,3456", "1_000", "1e5", ".5", "3.", "£3"],
)
def test_numeric_text_rejects(text: str) -> None:
    assert not is_numeric_text(text)


def test_parse_numeric_strips_separators() -> None:
    assert parse_numeric("1,234.5") == pytest.approx(1234.5)
    assert parse_numeric(" -17 ") == pytest.approx(-17.0)


def test_parse_numeric_rejects_garbage() -> None:
    with pytest.raises(UsageError):
        parse_numeric("twelve")


@pytest.mark.parametrize("text", ["2021-01-31", "31/12/2020", "12/31/2020", " 2021-02-03 "])
def test_date_text_accepts(text: str) -> None:
    assert is_date_text(text)


@pytest.mark.parametrize("text", ["2021-13-01", "2021/01/31", "yesterday", "", "32/12/2020"])
def test_date_text_rejects(text: str) -> None:
    assert not is_date_text(text)


# ---------------------------------------------------------------------------
# kind inference


def test_kind_numeric_column() -> None:
    assert infer_kind_of_cells(["1", "2.5", "-3", "1,000"]) == ColumnKind.NUMERIC


def test_kind_date_column() -> None:
    assert infer_kind_of_cells(["2021-01-01", "2021-02-03"]) == ColumnKind.DATE


def test_kind_text_column() -> None:
    assert infer_kind_of_cells(["alpha", "beta", "3"]) == ColumnKind.TEXT


def test_kind_threshold_boundary() -> None:
    # 9 of 10 parse: exactly 90%, which qualifies
    assert infer_kind_of_cells(["1"] * 9 + ["x"]) == ColumnKind.NUMERIC
    # 8 of 9 parse: 88.9%, which does not
    assert infer_kind_of_cells(["1"] * 8 + ["x"]) == ColumnKind.TEXT


def test_kind_ignores_empty_cells() -> None:
    # empties are excluded from the denominator
    assert infer_kind_of_cells(["1", "", "  ", "2"]) == ColumnKind.NUMERIC


def test_kind_all_empty_is_text() -> None:
    assert infer_kind_of_cells(["", "   "]) == ColumnKind.TEXT
    assert infer_kind_of_cells([]) == ColumnKind.TEXT


# ---------------------------------------------------------------------------
# construction and validation


def test_column_rejects_blank_header() -> None:
    with pytest.raises(UsageError):
        Column(position=0, header="   ", cells=(), kind=ColumnKind.TEXT)


def test_column_rejects_negative_position() -> None:
    with pytest.raises(UsageError):
        Column(position=-1, header="h", cells=(), kind=ColumnKind.TEXT)


def test_table_rejects_gapped_positions() -> None:
    cols = (
        Column(position=0, header="a", cells=("x",), kind=ColumnKind.TEXT),
        Column(position=2, header="b", cells=("y",), kind=ColumnKind.TEXT),
    )
    with pytest.raises(UsageError):
        Table(name="t", columns=cols, row_count=1)


def test_table_rejects_ragged_columns() -> None:
    cols = (
        Column(position=0, header="a", cells=("x", "y"), kind=ColumnKind.TEXT),
        Column(position=1, header="b", cells=("z",), kind=ColumnKind.TEXT),
    )
    with pytest.raises(UsageError):
        Table(name="t", columns=cols, row_count=2)


def test_build_rejects_ragged_rows() -> None:
    with pytest.raises(UsageError):
        Table.build(name="t", headers=["a", "b"], rows=[["1"]])


def test_build_strips_headers_to_none() -> None:
    table = Table.build(name="t", headers=["a", "  ", None], rows=[["1", "2", "3"]])
    assert table.headers == ["a", None, None]


# ---------------------------------------------------------------------------
# CSV ingestion


def test_load_table_basic() -> None:
    table = load_table(b"name,score\nalice,3\nbob,4\n", name="t")
    assert table.headers == ["name", "score"]
    assert table.row_count == 2
    assert table.rows() == [["alice", "3"], ["bob", "4"]]
    assert [c.kind for c in table.columns] == [ColumnKind.TEXT, ColumnKind.NUMERIC]


def test_load_table_pads_short_rows() -> None:
    table = load_table(b"a,b\n1\n")
    assert table.rows() == [["1", ""]]


def test_load_table_blank_header_is_unnamed() -> None:
    table = load_table(b"a,,c\n1,2,3\n")
    assert table.headers == ["a", None, "c"]


def test_load_table_without_header() -> None:
    table = load_table(b"1,2\n3,4\n", has_header=False)
    assert table.headers == [None, None]
    assert table.row_count == 2


def test_load_table_empty_input() -> None:
    with pytest.raises(EmptyTableError):
        load_table(b"")


def test_load_table_rejects_non_utf8() -> None:
    with pytest.raises(CsvParseError):
        load_table(b"\xff\xfe\x00bad")


def test_load_table_reports_offending_line() -> None:
    with pytest.raises(CsvParseError, match="line 2"):
        load_table(b'h1,h2\na,"b" x\n')


def test_load_table_quoted_cells() -> None:
    table = load_table(b'h\n"a,b"\n"say ""hi"""\n')
    assert table.columns[0].cells == ("a,b", 'say "hi"')


# ---------------------------------------------------------------------------
# serialization


def test_csv_round_trip_preserves_table() -> None:
    data = b'name,,note\nalice,1,"x,y"\nbob,2,"line\nbreak"\n'
    table = load_table(data, name="t")
    again = load_table(table_to_csv(table), name="t")
    assert again == table


def test_table_to_csv_writes_header_row() -> None:
    table = Table.build(name="t", headers=[None, "b"], rows=[["1", "2"]])
    assert table_to_csv(table) == b",b\n1,2\n"


def test_document_round_trip_preserves_kinds() -> None:
    table = load_table(b"n,d\n1,2021-01-01\n2,2021-02-03\n", name="t")
    doc = table_to_document(table)
    assert doc["kinds"] == ["numeric", "date"]
    assert table_from_document(doc) == table


def test_table_from_document_rejects_garbage() -> None:
    with pytest.raises(UsageError):
        table_from_document({"name": "t"})


# ---------------------------------------------------------------------------
# project store


def test_project_store_round_trip(tmp_path) -> None:
    store = ProjectStore(tmp_path / "projects")
    table = load_table(b"a,b\n1,2\n", name="t")
    project_id = store.save(table)
    assert store.load(project_id) == table
    assert store.ids() == [project_id]


def test_project_store_unknown_id(tmp_path) -> None:
    store = ProjectStore(tmp_path)
    with pytest.raises(ProjectNotFoundError):
        store.load("0123456789ab")


def test_project_store_malformed_id(tmp_path) -> None:
    store = ProjectStore(tmp_path)
    with pytest.raises(ProjectNotFoundError):
        store.load("../escape")
