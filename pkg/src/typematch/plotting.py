"""Chart rendering for aggregation reports.

Uses the Agg backend unconditionally: charts always go to files, never to a
display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def render_series_bar_chart(
    series: list[tuple[str, float | int]],
    path: str | Path,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> Path:
    """Render an aggregation series as a bar chart image and return its path."""
    keys = [k for k, _ in series]
    values = [v for _, v in series]
    fig, ax = plt.subplots(figsize=(max(6.0, 0.9 * len(keys) + 2.0), 4.5))
    try:
        ax.bar(range(len(keys)), values, color="#4878a8")
        ax.set_xticks(range(len(keys)))
        ax.set_xticklabels(keys, rotation=45, ha="right")
        if title:
            ax.set_title(title)
        if x_label:
            ax.set_xlabel(x_label)
        if y_label:
            ax.set_ylabel(y_label)
        ax.margins(x=0.02)
        fig.tight_layout()
        out = Path(path)
        fig.savefig(out, dpi=120)
        return out
    finally:
        plt.close(fig)
