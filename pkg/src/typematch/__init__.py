"""Type-driven schema matching, labeling, and merging for delimited tables."""

from .errors import (
    CsvParseError,
    EmptyProfileError,
    EmptyTableError,
    ProjectNotFoundError,
    ProviderError,
    ProviderProtocolError,
    ProviderTransportError,
    SessionNotFoundError,
    TypematchError,
    UsageError,
)
from .labeling import LabelSuggestion, suggest_labels, wilson_score
from .matchers import (
    ColumnTypeProfile,
    MatchCandidate,
    MatchConfig,
    TypeVector,
    assign,
    build_column_profile,
    build_profile_arrays,
    build_type_vector,
    cosine_similarity,
    match_tables,
    name_similarity,
    pearson,
    rank,
    spearman,
    type_matcher_score,
)
from .merge import AggFn, AggregationSpec, MergedTable, Provenance, aggregate, merge_tables
from .pipeline import MatchResult, run_match
from .reconcile import (
    CellAnnotation,
    ColumnAnnotation,
    FixtureProvider,
    HttpProvider,
    ReconciliationCache,
    TypeCandidate,
    annotate_column,
    fetch_candidates,
    parse_provider_spec,
)
from .tabular import (
    Column,
    ColumnKind,
    ProjectStore,
    Table,
    infer_column_kind,
    load_table,
    table_to_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AggFn",
    "AggregationSpec",
    "CellAnnotation",
    "Column",
    "ColumnAnnotation",
    "ColumnKind",
    "ColumnTypeProfile",
    "CsvParseError",
    "EmptyProfileError",
    "EmptyTableError",
    "FixtureProvider",
    "HttpProvider",
    "LabelSuggestion",
    "MatchCandidate",
    "MatchConfig",
    "MatchResult",
    "MergedTable",
    "ProjectNotFoundError",
    "ProjectStore",
    "Provenance",
    "ProviderError",
    "ProviderProtocolError",
    "ProviderTransportError",
    "ReconciliationCache",
    "SessionNotFoundError",
    "Table",
    "TypeCandidate",
    "TypeVector",
    "TypematchError",
    "UsageError",
    "aggregate",
    "annotate_column",
    "assign",
    "build_column_profile",
    "build_profile_arrays",
    "build_type_vector",
    "cosine_similarity",
    "fetch_candidates",
    "infer_column_kind",
    "load_table",
    "match_tables",
    "merge_tables",
    "name_similarity",
    "parse_provider_spec",
    "pearson",
    "rank",
    "run_match",
    "spearman",
    "suggest_labels",
    "table_to_csv",
    "type_matcher_score",
    "wilson_score",
]
