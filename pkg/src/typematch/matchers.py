"""Column similarity: type vectors, correlation matchers, name matching,
pair scoring, and one-to-one assignment.

Three signals compare the semantic types that reconciliation attached to two
text columns (cosine over sparse type vectors, Pearson and Spearman over
densified per-type totals); a fourth compares header spellings. A pair's
combined score is the plain average of whichever signals produced a value.

All reductions iterate over lexicographically sorted type ids so that equal
inputs always produce bit-identical scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EmptyProfileError, UsageError
from .reconcile import ColumnAnnotation
from .tabular import Column, ColumnKind, Table

# Sparse semantic-type vector: type id -> accumulated candidate score.
TypeVector = dict[str, float]

MATCHER_IDS = ("name", "cosine", "pearson", "spearman")

RANK_TIE_STRATEGIES = ("average", "min", "max", "ordinal")


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class ColumnTypeProfile:
    """Everything the matchers and the labeler need to know about one column's
    reconciliation results.

    per_type_scores keeps the individual candidate scores observed for each
    type id (one entry per annotated cell that proposed the type); totals and
    the flat score list are derived from it.
    """

    per_type_scores: dict[str, tuple[float, ...]]
    type_names: dict[str, str]

    @property
    def per_type_total(self) -> TypeVector:
        return {
            tid: math.fsum(scores)
            for tid, scores in sorted(self.per_type_scores.items())
        }

    @property
    def all_scores(self) -> list[float]:
        out: list[float] = []
        for tid in sorted(self.per_type_scores):
            out.extend(self.per_type_scores[tid])
        return out

    @property
    def is_empty(self) -> bool:
        return not self.per_type_scores

    def distinct_types(self) -> int:
        return len(self.per_type_scores)


def build_column_profile(annotation: ColumnAnnotation) -> ColumnTypeProfile:
    scores: dict[str, list[float]] = {}
    names: dict[str, str] = {}
    for cell in annotation.cells.values():
        for cand in cell.candidates:
            scores.setdefault(cand.type_id, []).append(cand.score)
            names.setdefault(cand.type_id, cand.display_name)
    return ColumnTypeProfile(
        per_type_scores={tid: tuple(v) for tid, v in scores.items()},
        type_names=names,
    )


def build_type_vector(annotation: ColumnAnnotation) -> TypeVector:
    """Sum candidate scores per type id over every annotated cell."""
    return build_column_profile(annotation).per_type_total


# ---------------------------------------------------------------------------
# vector and array math


def cosine_similarity(v: TypeVector, w: TypeVector) -> float:
    """Cosine of the angle between two sparse type vectors, in [0, 1].

    Empty or zero-norm input yields 0.0 rather than an error: a column with
    no type evidence is simply dissimilar to everything.
    """
    if not v or not w:
        return 0.0
    dot = math.fsum(v[t] * w[t] for t in sorted(v.keys() & w.keys()))
    norm_v = math.sqrt(math.fsum(v[t] * v[t] for t in sorted(v)))
    norm_w = math.sqrt(math.fsum(w[t] * w[t] for t in sorted(w)))
    if norm_v == 0.0 or norm_w == 0.0:
        return 0.0
    return min(1.0, abs(dot) / (norm_v * norm_w))


def build_profile_arrays(
    p: ColumnTypeProfile, q: ColumnTypeProfile
) -> tuple[list[float], list[float]]:
    """Densify two profiles over the sorted union of their type ids.

    X is taken from whichever profile has more distinct types (ties go to the
    first argument), so correlation inputs do not depend on table order.
    """
    if p.is_empty or q.is_empty:
        raise EmptyProfileError("cannot densify an empty profile")
    pt, qt = p.per_type_total, q.per_type_total
    union = sorted(pt.keys() | qt.keys())
    if p.distinct_types() >= q.distinct_types():
        first, second = pt, qt
    else:
        first, second = qt, pt
    x = [first.get(t, 0.0) for t in union]
    y = [second.get(t, 0.0) for t in union]
    return x, y


def pearson(x: list[float], y: list[float]) -> float:
    """Pearson product-moment correlation via the deviation-sum form.

    Arrays must be the same length, at least 2. Zero variance on either side
    yields 0.0 by convention.
    """
    if len(x) != len(y):
        raise UsageError("correlation arrays must have equal length")
    if len(x) < 2:
        raise UsageError("correlation needs at least 2 observations")
    if all(v == x[0] for v in x) or all(v == y[0] for v in y):
        return 0.0
    n = len(x)
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    num = math.fsum((a - mean_x) * (b - mean_y) for a, b in zip(x, y))
    ssx = math.fsum((a - mean_x) ** 2 for a in x)
    ssy = math.fsum((b - mean_y) ** 2 for b in y)
    r = num / (math.sqrt(ssx) * math.sqrt(ssy))
    return max(-1.0, min(1.0, r))


def rank(values: list[float], ties: str = "average") -> list[float]:
    """Ascending 1-based ranks with configurable tie handling.

    "average" (the default) assigns tied values the mean of the positions
    they occupy; "min"/"max" assign the smallest/largest position; "ordinal"
    breaks ties by original order. NaN values are rejected.
    """
    if ties not in RANK_TIE_STRATEGIES:
        raise UsageError(f"unknown tie strategy: {ties!r}")
    for v in values:
        if math.isnan(v):
            raise UsageError("cannot rank NaN values")
    n = len(values)
    order = sorted(range(n), key=values.__getitem__)
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        # positions i..j (0-based) hold one tie group
        if ties == "average":
            r = (i + j) / 2 + 1
            for k in range(i, j + 1):
                ranks[order[k]] = r
        elif ties == "min":
            for k in range(i, j + 1):
                ranks[order[k]] = float(i + 1)
        elif ties == "max":
            for k in range(i, j + 1):
                ranks[order[k]] = float(j + 1)
        else:  # ordinal
            for k in range(i, j + 1):
                ranks[order[k]] = float(k + 1)
        i = j + 1
    return ranks


def spearman(x: list[float], y: list[float]) -> float:
    """Spearman rank correlation: Pearson applied to average-tie ranks."""
    if len(x) != len(y):
        raise UsageError("correlation arrays must have equal length")
    if len(x) < 2:
        raise UsageError("correlation needs at least 2 observations")
    return pearson(rank(x), rank(y))


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


def name_similarity(h1: str | None, h2: str | None) -> float | None:
    """Normalized edit similarity of two lowercased headers, or None when
    either header is absent (the signal is then skipped, not zero)."""
    if h1 is None or h2 is None:
        return None
    a, b = h1.strip().lower(), h2.strip().lower()
    if not a or not b:
        return None
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


# ---------------------------------------------------------------------------
# pair scoring


def type_matcher_score(
    algorithm: str,
    source: Column,
    target: Column,
    source_profile: ColumnTypeProfile | None,
    target_profile: ColumnTypeProfile | None,
) -> float | None:
    """Score one type-based signal for a column pair, or None when skipped.

    Type matchers only apply between two text-kind columns that both carry a
    non-empty profile. Correlations are clamped into [0, 1]: anti-correlation
    is no evidence of a match.
    """
    if source.kind != ColumnKind.TEXT or target.kind != ColumnKind.TEXT:
        return None
    if source_profile is None or target_profile is None:
        return None
    if source_profile.is_empty or target_profile.is_empty:
        return None
    if algorithm == "cosine":
        return cosine_similarity(
            source_profile.per_type_total, target_profile.per_type_total
        )
    if algorithm in ("pearson", "spearman"):
        x, y = build_profile_arrays(source_profile, target_profile)
        if len(x) < 2:
            # a single shared type id carries no correlation signal
            return 0.0
        r = pearson(x, y) if algorithm == "pearson" else spearman(x, y)
        return min(1.0, max(0.0, r))
    raise UsageError(f"unknown type matcher: {algorithm!r}")


@dataclass(frozen=True)
class MatchConfig:
    matchers: tuple[str, ...] = MATCHER_IDS
    threshold: float = 0.5

    def __post_init__(self) -> None:
        if not self.matchers:
            raise UsageError("at least one matcher must be enabled")
        for m in self.matchers:
            if m not in MATCHER_IDS:
                raise UsageError(f"unknown matcher: {m!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise UsageError("threshold must be within [0, 1]")


@dataclass(frozen=True)
class MatchCandidate:
    """A surviving column pair: per-matcher scores (None = skipped) and the
    average of the non-skipped scores."""

    source: int
    target: int
    scores: dict[str, float | None] = field(compare=False)
    combined: float = 0.0


def match_tables(
    source: Table,
    target: Table,
    source_profiles: dict[int, ColumnTypeProfile],
    target_profiles: dict[int, ColumnTypeProfile],
    config: MatchConfig = MatchConfig(),
) -> list[MatchCandidate]:
    """Score every source x target column pair and keep those at or above
    the threshold, sorted by combined score descending.

    Profiles are keyed by column position and may cover any subset of the
    text columns; pairs where every enabled matcher skips are dropped.
    Ties in combined score order by (source, target) position.
    """
    if not source.columns or not target.columns:
        raise UsageError("cannot match an empty table")
    out: list[MatchCandidate] = []
    for src in source.columns:
        for tgt in target.columns:
            scores: dict[str, float | None] = {}
            for matcher in config.matchers:
                if matcher == "name":
                    scores[matcher] = name_similarity(src.header, tgt.header)
                else:
                    scores[matcher] = type_matcher_score(
                        matcher,
                        src,
                        tgt,
                        source_profiles.get(src.position),
                        target_profiles.get(tgt.position),
                    )
            live = [v for v in scores.values() if v is not None]
            if not live:
                continue
            combined = math.fsum(live) / len(live)
            if combined < config.threshold:
                continue
            out.append(
                MatchCandidate(
                    source=src.position,
                    target=tgt.position,
                    scores=scores,
                    combined=combined,
                )
            )
    out.sort(key=lambda c: (-c.combined, c.source, c.target))
    return out


def assign(candidates: list[MatchCandidate]) -> list[tuple[int, int, float]]:
    """Greedy one-to-one assignment over candidates in descending score order.

    Each source and each target column is used at most once; a pair is taken
    exactly when both of its columns are still free.
    """
    ordered = sorted(candidates, key=lambda c: (-c.combined, c.source, c.target))
    used_src: set[int] = set()
    used_tgt: set[int] = set()
    mapping: list[tuple[int, int, float]] = []
    for cand in ordered:
        if cand.source in used_src or cand.target in used_tgt:
            continue
        used_src.add(cand.source)
        used_tgt.add(cand.target)
        mapping.append((cand.source, cand.target, cand.combined))
    return mapping
