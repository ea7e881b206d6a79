"""Robust aggregation of rank columns and comparison of orderings.

The three aggregate measures operate on an evaluation table's rule
columns: Borda (literal row sums, so fractional tie ranks contribute
exactly), the simple per-row median, and the averaged rank median
(re-rank columns, take row medians, rank the medians back onto 1..m).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import PolicyRankError
from .model import rank_with_ties
from .rules import EvaluationTable


@dataclass(frozen=True)
class AggregationResult:
    """Per-alternative aggregate scores, sorted descending by Borda.

    Sorting is stable on alternative id, so equal Borda scores keep a
    deterministic order.
    """

    alternative_ids: tuple[int, ...]
    alternative_names: tuple[str, ...]
    borda: tuple[float, ...]
    simple_median: tuple[float, ...]
    averaged_rank_median: tuple[float, ...]

    def rows(self):
        return list(zip(self.alternative_ids, self.alternative_names,
                        self.borda, self.simple_median, self.averaged_rank_median))

    def value(self, measure: str, alternative_id: int) -> float:
        idx = self.alternative_ids.index(alternative_id)
        return getattr(self, measure)[idx]


def borda(etable: EvaluationTable) -> dict[int, float]:
    """Row sums of the rank columns, keyed by alternative id."""
    sums = etable.columns.sum(axis=1)
    return {aid: float(v) for aid, v in zip(etable.alternative_ids, sums)}


def median_of_ranks(etable: EvaluationTable) -> dict[int, float]:
    """Per-row median of the rank columns (mean of middle two when even)."""
    med = np.median(etable.columns, axis=1)
    return {aid: float(v) for aid, v in zip(etable.alternative_ids, med)}


def averaged_rank_median(etable: EvaluationTable) -> dict[int, float]:
    """Re-rank each column with average ties, take row medians, then rank
    the medians back onto the 1..m scale.

    Re-ranking is idempotent on columns that already are average-tie
    ranks, so engine-produced tables only pay for the final step.
    """
    reranked = np.column_stack([
        rank_with_ties(etable.columns[:, j]).as_array()
        for j in range(etable.columns.shape[1])
    ])
    med = np.median(reranked, axis=1)
    final = rank_with_ties(med).as_array()
    return {aid: float(v) for aid, v in zip(etable.alternative_ids, final)}


def aggregate_table(etable: EvaluationTable) -> AggregationResult:
    """All three measures, sorted descending by Borda (stable on id)."""
    b = borda(etable)
    med = median_of_ranks(etable)
    arm = averaged_rank_median(etable)
    order = sorted(range(etable.m),
                   key=lambda i: (-b[etable.alternative_ids[i]], etable.alternative_ids[i]))
    ids = tuple(etable.alternative_ids[i] for i in order)
    return AggregationResult(
        alternative_ids=ids,
        alternative_names=tuple(etable.alternative_names[i] for i in order),
        borda=tuple(b[a] for a in ids),
        simple_median=tuple(med[a] for a in ids),
        averaged_rank_median=tuple(arm[a] for a in ids),
    )


@dataclass(frozen=True)
class RankComparison:
    """Agreement statistics between two orderings over their common ids.

    Positions are 1-based from the front of each list (1 = most
    preferred); ``deltas`` maps id -> position_b - position_a, so a
    negative delta means the id moved up in the second ordering.
    """

    common_ids: tuple[int, ...]          # in first-ordering order
    kendall_tau: float
    spearman_rho: float
    top_k_overlap: Mapping[int, int]     # k -> |top_k(a) & top_k(b)|
    positions_a: Mapping[int, int]
    positions_b: Mapping[int, int]

    @property
    def deltas(self) -> dict[int, int]:
        return {i: self.positions_b[i] - self.positions_a[i] for i in self.common_ids}


def compare_rankings(ranking_a: Sequence[int], ranking_b: Sequence[int]) -> RankComparison:
    """Compare two best-first id orderings on their intersection."""
    for label, ranking in (("first", ranking_a), ("second", ranking_b)):
        if len(set(ranking)) != len(ranking):
            raise PolicyRankError(f"{label} ranking contains duplicate ids")
    common = [i for i in ranking_a if i in set(ranking_b)]
    if not common:
        raise PolicyRankError("rankings have no alternatives in common")
    order_b = [i for i in ranking_b if i in set(common)]
    pos_a = {aid: k + 1 for k, aid in enumerate(common)}
    pos_b = {aid: k + 1 for k, aid in enumerate(order_b)}
    xs = [pos_a[i] for i in common]
    ys = [pos_b[i] for i in common]
    if len(common) == 1:
        tau, rho = 1.0, 1.0
    else:
        tau = float(stats.kendalltau(xs, ys).statistic)
        rho = float(stats.spearmanr(xs, ys).statistic)
    overlap = {}
    for k in range(1, len(common) + 1):
        overlap[k] = len(set(common[:k]) & set(order_b[:k]))
    return RankComparison(
        common_ids=tuple(common),
        kendall_tau=tau,
        spearman_rho=rho,
        top_k_overlap=overlap,
        positions_a=pos_a,
        positions_b=pos_b,
    )
