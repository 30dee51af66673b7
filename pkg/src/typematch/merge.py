"""Merging two tables under a column mapping, and grouped aggregation.

Merging is a row union: mapped column pairs stack source cells above target
cells; unmatched columns (kept by default) are padded with empty cells on
the side they do not cover. Aggregation groups a table's rows by one
column's text and reduces another column's parseable numeric values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import UsageError
from .tabular import Column, ColumnKind, Table, infer_kind_of_cells, is_numeric_text, parse_numeric


class Provenance(str, Enum):
    SOURCE_ONLY = "source-only"
    TARGET_ONLY = "target-only"
    MERGED = "merged"


@dataclass(frozen=True)
class MergedTable:
    table: Table
    provenance: tuple[Provenance, ...]


def merge_tables(
    source: Table,
    target: Table,
    mapping: Sequence[tuple[int, int]],
    include_unmatched: bool = True,
) -> MergedTable:
    """Union-merge target rows under source rows according to a column mapping.

    Mapped pairs become single columns keeping the source header. Column
    order is: source columns in source order, then unmatched target columns
    in target order. The result always has source.row_count +
    target.row_count rows, whatever the mapping.
    """
    src_to_tgt: dict[int, int] = {}
    used_targets: set[int] = set()
    for s, t in mapping:
        if not 0 <= s < len(source.columns):
            raise UsageError(f"mapping references unknown source column {s}")
        if not 0 <= t < len(target.columns):
            raise UsageError(f"mapping references unknown target column {t}")
        if s in src_to_tgt or t in used_targets:
            raise UsageError("mapping must be one-to-one")
        src_to_tgt[s] = t
        used_targets.add(t)

    src_pad = ("",) * source.row_count
    tgt_pad = ("",) * target.row_count
    headers: list[str | None] = []
    cell_runs: list[tuple[str, ...]] = []
    provenance: list[Provenance] = []

    for src_col in source.columns:
        mapped = src_to_tgt.get(src_col.position)
        if mapped is not None:
            headers.append(src_col.header)
            cell_runs.append(src_col.cells + target.columns[mapped].cells)
            provenance.append(Provenance.MERGED)
        elif include_unmatched:
            headers.append(src_col.header)
            cell_runs.append(src_col.cells + tgt_pad)
            provenance.append(Provenance.SOURCE_ONLY)
    if include_unmatched:
        for tgt_col in target.columns:
            if tgt_col.position in used_targets:
                continue
            headers.append(tgt_col.header)
            cell_runs.append(src_pad + tgt_col.cells)
            provenance.append(Provenance.TARGET_ONLY)

    columns = tuple(
        Column(
            position=i,
            header=headers[i],
            cells=cell_runs[i],
            kind=infer_kind_of_cells(cell_runs[i]),
        )
        for i in range(len(cell_runs))
    )
    merged = Table(
        name=f"{source.name}+{target.name}" if source.name or target.name else "",
        columns=columns,
        row_count=source.row_count + target.row_count,
    )
    return MergedTable(table=merged, provenance=tuple(provenance))


class AggFn(str, Enum):
    SUM = "sum"
    AVG = "avg"
    COUNT = "count"
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class AggregationSpec:
    x_column: int
    y_column: int
    fn: AggFn


def aggregate(table: Table, spec: AggregationSpec) -> list[tuple[str, float | int]]:
    """Group rows by x-column text and reduce the y column, sorted by key.

    count reports group sizes and works on any y column. The numeric
    reductions parse y cells under the numeric grammar, skip the ones that
    do not parse, and omit groups left with no values at all.
    """
    if not 0 <= spec.x_column < len(table.columns):
        raise UsageError(f"unknown x column {spec.x_column}")
    if not 0 <= spec.y_column < len(table.columns):
        raise UsageError(f"unknown y column {spec.y_column}")
    y_col = table.columns[spec.y_column]
    if spec.fn != AggFn.COUNT and y_col.kind != ColumnKind.NUMERIC:
        raise UsageError(
            f"aggregation {spec.fn.value} needs a numeric y column; "
            f"column {spec.y_column} is {y_col.kind.value}"
        )
    x_col = table.columns[spec.x_column]

    groups: dict[str, list[float]] = {}
    sizes: dict[str, int] = {}
    for row in range(table.row_count):
        key = x_col.cells[row]
        sizes[key] = sizes.get(key, 0) + 1
        y_text = y_col.cells[row]
        if is_numeric_text(y_text):
            groups.setdefault(key, []).append(parse_numeric(y_text))

    out: list[tuple[str, float | int]] = []
    for key in sorted(sizes):
        if spec.fn == AggFn.COUNT:
            out.append((key, sizes[key]))
            continue
        values = groups.get(key)
        if not values:
            continue
        if spec.fn == AggFn.SUM:
            out.append((key, math.fsum(values)))
        elif spec.fn == AggFn.AVG:
            out.append((key, math.fsum(values) / len(values)))
        elif spec.fn == AggFn.MIN:
            out.append((key, min(values)))
        elif spec.fn == AggFn.MAX:
            out.append((key, max(values)))
    return out
