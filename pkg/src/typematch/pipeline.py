"""End-to-end orchestration shared by the CLI and the HTTP service.

Both entry points go through the same functions and the same JSON
renderers, so a match run produces byte-identical output whichever way it
was requested.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import UsageError
from .labeling import DEFAULT_TOP, DEFAULT_Z, suggest_labels
from .matchers import (
    ColumnTypeProfile,
    MatchCandidate,
    MatchConfig,
    assign,
    build_column_profile,
    match_tables,
)
from .reconcile import (
    DEFAULT_CANDIDATE_LIMIT,
    ColumnAnnotation,
    Provider,
    ReconciliationCache,
    annotate_column,
)
from .tabular import ColumnKind, Table

TYPE_MATCHERS = ("cosine", "pearson", "spearman")


def annotate_text_columns(
    provider: Provider,
    table: Table,
    k: int = DEFAULT_CANDIDATE_LIMIT,
    cache: ReconciliationCache | None = None,
) -> dict[int, ColumnAnnotation]:
    """Annotate every text-kind column of a table, keyed by position."""
    return {
        col.position: annotate_column(provider, col, k=k, cache=cache)
        for col in table.columns
        if col.kind == ColumnKind.TEXT
    }


def profiles_for(annotations: dict[int, ColumnAnnotation]) -> dict[int, ColumnTypeProfile]:
    return {pos: build_column_profile(ann) for pos, ann in annotations.items()}


@dataclass(frozen=True)
class MatchResult:
    candidates: list[MatchCandidate]
    mapping: list[tuple[int, int, float]]


def run_match(
    source: Table,
    target: Table,
    config: MatchConfig = MatchConfig(),
    provider: Provider | None = None,
    k: int = DEFAULT_CANDIDATE_LIMIT,
    cache: ReconciliationCache | None = None,
) -> MatchResult:
    """Annotate (when any type matcher is enabled), score pairs, and propose
    a greedy one-to-one mapping.

    A provider is only required when the configuration enables a type-based
    matcher; pure name matching runs without one.
    """
    needs_types = any(m in TYPE_MATCHERS for m in config.matchers)
    src_profiles: dict[int, ColumnTypeProfile] = {}
    tgt_profiles: dict[int, ColumnTypeProfile] = {}
    if needs_types:
        if provider is None:
            raise UsageError("type matchers require a reconciliation provider")
        src_profiles = profiles_for(annotate_text_columns(provider, source, k, cache))
        tgt_profiles = profiles_for(annotate_text_columns(provider, target, k, cache))
    candidates = match_tables(source, target, src_profiles, tgt_profiles, config)
    return MatchResult(candidates=candidates, mapping=assign(candidates))


# ---------------------------------------------------------------------------
# wire formats


def match_result_to_document(result: MatchResult) -> dict:
    pairs = []
    for cand in result.candidates:
        scores = {
            m: ("skipped" if v is None else v) for m, v in cand.scores.items()
        }
        pairs.append(
            {
                "source": cand.source,
                "target": cand.target,
                "scores": scores,
                "combined": cand.combined,
            }
        )
    return {
        "pairs": pairs,
        "mapping": [[s, t] for s, t, _ in result.mapping],
    }


def render_json(document: dict) -> bytes:
    """The one serializer used for every JSON artifact this package emits."""
    return (json.dumps(document, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def render_match_result(result: MatchResult) -> bytes:
    return render_json(match_result_to_document(result))


def run_label(
    table: Table,
    column: int,
    provider: Provider,
    k: int = DEFAULT_CANDIDATE_LIMIT,
    z: float = DEFAULT_Z,
    top_m: int = DEFAULT_TOP,
    cache: ReconciliationCache | None = None,
) -> dict:
    """Suggest headers for one column; returns the wire document."""
    if not 0 <= column < len(table.columns):
        raise UsageError(f"unknown column {column}")
    annotation = annotate_column(provider, table.columns[column], k=k, cache=cache)
    profile = build_column_profile(annotation)
    suggestions = suggest_labels(profile, z=z, top_m=top_m)
    return {
        "column": column,
        "suggestions": [
            {
                "label": s.label,
                "type_id": s.type_id,
                "wilson": s.wilson,
                "n": s.support_n,
            }
            for s in suggestions
        ],
    }


def series_to_document(series: list[tuple[str, float | int]]) -> dict:
    return {"series": [{"key": k, "value": v} for k, v in series]}
