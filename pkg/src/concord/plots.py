"""Figure rendering for frequency, keyword, and distribution reports.

Each function writes one matplotlib figure to a file, sized for quick
inspection next to the TSV export the CLI produces on the same run.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytics import FrequencyList, KeywordRow

__all__ = ["distribution_figure", "frequency_figure", "keywords_figure"]

_BAR_COLOR = "#4878a8"
_UNDER_COLOR = "#b04a4a"


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def frequency_figure(freq: FrequencyList, path: str | Path, top: int = 25) -> Path:
    """Horizontal bar chart of the most frequent values."""
    rows = list(freq.rows[:top])
    rows.reverse()
    labels = [value for value, _ in rows]
    counts = [count for _, count in rows]
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.3 * len(rows) + 1)))
    ax.barh(range(len(rows)), counts, color=_BAR_COLOR)
    ax.set_yticks(range(len(rows)), labels=labels, fontsize=8)
    ax.set_xlabel("occurrences")
    ax.set_title(f"{freq.attribute} frequencies (scope: {freq.scope_size:,} tokens)")
    return _save(fig, path)


def keywords_figure(rows: Sequence[KeywordRow], path: str | Path, top: int = 25) -> Path:
    """Bar chart of G2 scores; under-represented values point the other way."""
    shown = list(rows[:top])
    shown.reverse()
    labels = [r.value for r in shown]
    scores = [r.g2 if r.direction == "over" else -r.g2 for r in shown]
    colors = [_BAR_COLOR if s >= 0 else _UNDER_COLOR for s in scores]
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.3 * len(shown) + 1)))
    ax.barh(range(len(shown)), scores, color=colors)
    ax.set_yticks(range(len(shown)), labels=labels, fontsize=8)
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("log-likelihood (negative = under-represented)")
    ax.set_title("keywords by G2")
    return _save(fig, path)


def distribution_figure(categories: Mapping[str, int], path: str | Path,
                        key: str = "category") -> Path:
    """Bar chart of match counts per metadata category."""
    items = sorted(categories.items())
    fig, ax = plt.subplots(figsize=(max(4.0, 0.7 * len(items) + 2), 4))
    ax.bar([k for k, _ in items], [v for _, v in items], color=_BAR_COLOR)
    ax.set_xlabel(key)
    ax.set_ylabel("matches")
    ax.set_title(f"matches by {key}")
    return _save(fig, path)
