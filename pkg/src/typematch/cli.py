"""Command line interface.

Subcommands mirror the pipeline stages: match two CSVs, suggest labels for a
column, merge under a mapping, aggregate (optionally rendering a chart), and
serve the HTTP API. Exit codes: 0 success, 2 command misuse, 1 runtime
failure.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .errors import TypematchError, UsageError
from .matchers import MATCHER_IDS, MatchConfig
from .merge import AggFn, AggregationSpec, aggregate as run_aggregate, merge_tables
from .pipeline import (
    TYPE_MATCHERS,
    render_json,
    render_match_result,
    run_label,
    run_match,
    series_to_document,
)
from .reconcile import DEFAULT_CANDIDATE_LIMIT, Provider, parse_provider_spec
from .tabular import load_table, table_to_csv

PROVIDER_ENV = "TYPEMATCH_PROVIDER_URL"


def _resolve_provider(spec: str | None, required: bool) -> Provider | None:
    if spec is None:
        spec = os.environ.get(PROVIDER_ENV)
        if spec is not None:
            spec = spec.strip() or None
    if spec is None:
        if required:
            raise click.UsageError(
                f"a reconciliation provider is required; pass --provider or set {PROVIDER_ENV}"
            )
        return None
    try:
        return parse_provider_spec(spec)
    except UsageError as exc:
        raise click.UsageError(str(exc)) from exc


def _load_csv(path: Path, has_header: bool) -> "Table":
    from .tabular import Table  # local name only for the annotation

    try:
        return load_table(path.read_bytes(), has_header=has_header, name=path.stem)
    except TypematchError as exc:
        raise click.ClickException(f"{path}: {exc}") from exc


def _write_output(data: bytes, output: Path | None) -> None:
    if output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        output.write_bytes(data)


def _parse_matchers(value: str) -> tuple[str, ...]:
    names = tuple(m.strip() for m in value.split(",") if m.strip())
    for m in names:
        if m not in MATCHER_IDS:
            raise click.UsageError(
                f"unknown matcher {m!r}; choose from {', '.join(MATCHER_IDS)}"
            )
    if not names:
        raise click.UsageError("at least one matcher must be enabled")
    return names


@click.group()
@click.version_option(package_name="typematch")
def main() -> None:
    """Schema matching over delimited files using semantic type evidence."""


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("target", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--provider", "provider_spec", default=None,
              help="fixture:<path> or http:<url>; defaults to $" + PROVIDER_ENV)
@click.option("--matchers", default=",".join(MATCHER_IDS), show_default=True,
              help="comma-separated subset of: " + ", ".join(MATCHER_IDS))
@click.option("--threshold", type=float, default=0.5, show_default=True,
              help="minimum combined score for a pair to survive")
@click.option("-k", "--candidates", type=int, default=DEFAULT_CANDIDATE_LIMIT,
              show_default=True, help="type candidates kept per cell")
@click.option("--has-header/--no-has-header", default=True, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="write the match JSON here instead of stdout")
def match(source: Path, target: Path, provider_spec: str | None, matchers: str,
          threshold: float, candidates: int, has_header: bool, output: Path | None) -> None:
    """Suggest column pairs between SOURCE and TARGET CSV files."""
    names = _parse_matchers(matchers)
    try:
        config = MatchConfig(matchers=names, threshold=threshold)
    except UsageError as exc:
        raise click.UsageError(str(exc)) from exc
    needs_types = any(m in TYPE_MATCHERS for m in names)
    provider = _resolve_provider(provider_spec, required=needs_types)
    src = _load_csv(source, has_header)
    tgt = _load_csv(target, has_header)
    try:
        result = run_match(src, tgt, config, provider=provider, k=candidates)
    except UsageError as exc:
        raise click.UsageError(str(exc)) from exc
    except TypematchError as exc:
        raise click.ClickException(str(exc)) from exc
    _write_output(render_match_result(result), output)


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--column", type=int, required=True, help="0-based column to label")
@click.option("--provider", "provider_spec", default=None,
              help="fixture:<path> or http:<url>; defaults to $" + PROVIDER_ENV)
@click.option("-k", "--candidates", type=int, default=DEFAULT_CANDIDATE_LIMIT, show_default=True)
@click.option("-z", "--z-score", type=float, default=1.96, show_default=True,
              help="confidence z used in the Wilson bound")
@click.option("--top", type=int, default=3, show_default=True, help="suggestions returned")
@click.option("--has-header/--no-has-header", default=True, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), default=None)
def label(source: Path, column: int, provider_spec: str | None, candidates: int,
          z_score: float, top: int, has_header: bool, output: Path | None) -> None:
    """Suggest header labels for one column of SOURCE."""
    provider = _resolve_provider(provider_spec, required=True)
    table = _load_csv(source, has_header)
    try:
        doc = run_label(table, column, provider, k=candidates, z=z_score, top_m=top)
    except UsageError as exc:
        raise click.UsageError(str(exc)) from exc
    except TypematchError as exc:
        raise click.ClickException(str(exc)) from exc
    _write_output(render_json(doc), output)


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("target", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--mapping", "mapping_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON: either match output or a bare [[source, target], ...] list")
@click.option("--include-unmatched/--matched-only", default=True, show_default=True)
@click.option("--has-header/--no-has-header", default=True, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="write merged CSV here instead of stdout")
def merge(source: Path, target: Path, mapping_path: Path, include_unmatched: bool,
          has_header: bool, output: Path | None) -> None:
    """Merge TARGET rows under SOURCE rows according to a column mapping."""
    try:
        doc = json.loads(mapping_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read mapping: {exc}") from exc
    raw = doc.get("mapping") if isinstance(doc, dict) else doc
    if not isinstance(raw, list):
        raise click.UsageError("mapping JSON must be a list or contain a 'mapping' list")
    try:
        pairs = [(int(s), int(t)) for s, t in raw]
    except (TypeError, ValueError) as exc:
        raise click.UsageError(f"malformed mapping entry: {exc}") from exc
    src = _load_csv(source, has_header)
    tgt = _load_csv(target, has_header)
    try:
        merged = merge_tables(src, tgt, pairs, include_unmatched=include_unmatched)
    except UsageError as exc:
        raise click.UsageError(str(exc)) from exc
    _write_output(table_to_csv(merged.table), output)


@main.command()
@click.argument("table_path", metavar="TABLE",
                type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--x", "x_column", type=int, required=True, help="0-based grouping column")
@click.option("--y", "y_column", type=int, required=True, help="0-based value column")
@click.option("--fn", type=click.Choice([f.value for f in AggFn]), required=True)
@click.option("--has-header/--no-has-header", default=True, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="write the series JSON here instead of stdout")
@click.option("--csv", "csv_output", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="also write the series as key,value CSV")
@click.option("--plot", "plot_output", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="also render the series as a bar chart image")
def aggregate(table_path: Path, x_column: int, y_column: int, fn: str, has_header: bool,
              output: Path | None, csv_output: Path | None, plot_output: Path | None) -> None:
    """Group TABLE rows by column --x and reduce column --y with --fn."""
    table = _load_csv(table_path, has_header)
    spec = AggregationSpec(x_column=x_column, y_column=y_column, fn=AggFn(fn))
    try:
        series = run_aggregate(table, spec)
    except UsageError as exc:
        raise click.UsageError(str(exc)) from exc
    _write_output(render_json(series_to_document(series)), output)
    if csv_output is not None:
        import csv as csv_mod

        with open(csv_output, "w", encoding="utf-8", newline="") as fh:
            writer = csv_mod.writer(fh, lineterminator="\n")
            writer.writerow(["key", "value"])
            writer.writerows(series)
    if plot_output is not None:
        from .plotting import render_series_bar_chart

        x_name = table.columns[x_column].header or f"column {x_column}"
        y_name = table.columns[y_column].header or f"column {y_column}"
        render_series_bar_chart(
            series,
            plot_output,
            title=f"{fn}({y_name}) by {x_name}",
            x_label=x_name,
            y_label=f"{fn}({y_name})",
        )


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--provider", "provider_spec", default=None,
              help="default provider for sessions; fixture:<path> or http:<url>")
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path),
              default=Path("typematch-data"), show_default=True,
              help="directory for stored projects and sessions")
@click.option("--ui-dir", type=click.Path(file_okay=False, exists=True, path_type=Path),
              default=None, help="static directory to serve at / (a built review UI)")
def serve(host: str, port: int, provider_spec: str | None, data_dir: Path,
          ui_dir: Path | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    provider = _resolve_provider(provider_spec, required=False)
    app = create_app(data_dir=data_dir, default_provider=provider, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
