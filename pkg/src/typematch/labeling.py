"""Header suggestions for unnamed columns, ranked by Wilson lower bounds.

A type observed with high scores in many cells deserves more confidence
than one observed once with a high score. Bare averages cannot express
that, so each type's normalized mean score is shrunk by the lower bound of
its Wilson score interval before ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyProfileError, UsageError
from .matchers import ColumnTypeProfile

DEFAULT_Z = 1.96
DEFAULT_TOP = 3


def wilson_score(p_hat: float, n: int, z: float = DEFAULT_Z) -> float:
    """Lower bound of the Wilson score interval for a Bernoulli parameter.

        w = (p + z^2/2n - z*sqrt(p(1-p)/n + z^2/4n^2)) / (1 + z^2/n)

    The bound lives in [0, p_hat]; it approaches p_hat as n grows and is
    exactly 0.0 when p_hat is 0 (both numerator terms cancel).
    """
    if not 0.0 <= p_hat <= 1.0:
        raise UsageError("p_hat must be within [0, 1]")
    if n < 1:
        raise UsageError("sample count must be at least 1")
    if z <= 0:
        raise UsageError("z must be positive")
    if p_hat == 0.0:
        return 0.0
    z2 = z * z
    center = p_hat + z2 / (2 * n)
    margin = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4 * n * n))
    return max(0.0, (center - margin) / (1.0 + z2 / n))


@dataclass(frozen=True)
class LabelSuggestion:
    label: str
    type_id: str
    wilson: float
    support_n: int
    p_hat: float


def suggest_labels(
    profile: ColumnTypeProfile, z: float = DEFAULT_Z, top_m: int = DEFAULT_TOP
) -> list[LabelSuggestion]:
    """Rank a column's observed types as header suggestions.

    Every candidate score in the column is normalized by the column's
    maximum observed score so each type's mean lands in [0, 1]; that mean
    becomes p_hat with n = the number of cells that proposed the type. The
    top_m types by Wilson lower bound are returned (ties break by type id).
    """
    if profile.is_empty:
        raise EmptyProfileError("cannot suggest labels for an empty profile")
    if top_m < 1:
        raise UsageError("top_m must be at least 1")
    max_score = max(profile.all_scores)
    suggestions = []
    for type_id in sorted(profile.per_type_scores):
        scores = profile.per_type_scores[type_id]
        n = len(scores)
        mean = math.fsum(scores) / n
        p_hat = min(1.0, mean / max_score) if max_score > 0 else 0.0
        suggestions.append(
            LabelSuggestion(
                label=profile.type_names[type_id],
                type_id=type_id,
                wilson=wilson_score(p_hat, n, z),
                support_n=n,
                p_hat=p_hat,
            )
        )
    suggestions.sort(key=lambda s: (-s.wilson, s.type_id))
    return suggestions[:top_m]
