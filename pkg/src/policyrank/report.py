"""Report rendering: delimited outputs plus figures for deliberation decks.

The report path writes the evaluation and aggregation tables next to
three figures: a score heatmap of the working table, a heatmap of the
per-rule rank columns, and a bar chart of the Borda ordering. Figures
are rendered headless with pinned metadata so repeated runs produce
identical bytes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from . import storage  # noqa: E402
from .aggregate import AggregationResult, aggregate_table  # noqa: E402
from .model import AcsTable, WeightVector  # noqa: E402
from .rules import RULE_ORDER, EvaluationTable, RuleParams, run_all_rules  # noqa: E402

_PNG_METADATA = {"Software": "policyrank"}


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)


def _short_names(names: Sequence[str], limit: int = 28) -> list[str]:
    return [n if len(n) <= limit else n[:limit - 1] + "…" for n in names]


def render_scores_heatmap(table: AcsTable, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(2.4 + 0.55 * table.n, 1.5 + 0.32 * table.m),
                           layout="constrained")
    image = ax.imshow(table.scores, cmap="viridis", aspect="auto")
    ax.set_xticks(range(table.n), table.criterion_ids)
    ax.set_yticks(range(table.m),
                  _short_names([f"{a.id}: {a.name}" for a in table.alternatives]))
    ax.set_xlabel("criterion")
    fig.colorbar(image, ax=ax, label="score")
    ax.set_title("Performance table")
    _save(fig, Path(path))


def render_rank_heatmap(etable: EvaluationTable, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(2.4 + 0.7 * len(etable.rules), 1.5 + 0.32 * etable.m),
                           layout="constrained")
    image = ax.imshow(etable.columns, cmap="RdYlGn", aspect="auto")
    ax.set_xticks(range(len(etable.rules)), etable.rules, rotation=35, ha="right")
    ax.set_yticks(range(etable.m),
                  _short_names([f"{i}: {n}" for i, n in
                                zip(etable.alternative_ids, etable.alternative_names)]))
    fig.colorbar(image, ax=ax, label="rank (larger = preferred)")
    ax.set_title("Rank columns by decision rule")
    _save(fig, Path(path))


def render_borda_chart(result: AggregationResult, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(8, 1.0 + 0.32 * len(result.alternative_ids)),
                           layout="constrained")
    order = np.arange(len(result.alternative_ids))[::-1]
    labels = _short_names([f"{i}: {n}" for i, n in
                           zip(result.alternative_ids, result.alternative_names)])
    ax.barh(order, result.borda, color="#3b6ea5")
    ax.set_yticks(order, labels)
    ax.set_xlabel("Borda score (row sum of ranks)")
    ax.set_title("Aggregate ordering")
    _save(fig, Path(path))


def write_report(table: AcsTable, outdir: str | Path,
                 weights: WeightVector | None = None,
                 params: RuleParams | None = None,
                 rules: Sequence[str] | None = None) -> dict[str, Path]:
    """Rank, aggregate, and render everything into one directory.

    Returns a mapping of artifact labels to paths; the delimited outputs
    are the machine-readable record, the figures the human one.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    etable = run_all_rules(table, weights, params,
                           rules if rules is not None else RULE_ORDER)
    agg = aggregate_table(etable)
    artifacts = {
        "etable": outdir / "etable.csv",
        "atable": outdir / "atable.csv",
        "scores_heatmap": outdir / "scores_heatmap.png",
        "rank_heatmap": outdir / "rank_heatmap.png",
        "borda_chart": outdir / "borda_chart.png",
    }
    storage.save_etable(artifacts["etable"], etable)
    storage.save_atable(artifacts["atable"], agg)
    render_scores_heatmap(table, artifacts["scores_heatmap"])
    render_rank_heatmap(etable, artifacts["rank_heatmap"])
    render_borda_chart(agg, artifacts["borda_chart"])
    return artifacts
