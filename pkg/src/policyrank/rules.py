"""The nine decision rules, each mapping a performance table to ranks.

Every rule returns a :class:`RuleResult` with per-alternative raw values
and an average-tie rank vector oriented so that larger rank = more
preferred. ``run_all_rules`` assembles all nine into an
:class:`EvaluationTable` (one rank column per rule).

Rules that the literature leaves under-specified (lengths, SAW
normalization, Hurwicz alpha, PROMETHEE preference function, TOPSIS
normalization) record the convention actually used in ``params`` so a
run is reproducible from its manifest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateColumnError, PolicyRankError
from .model import COST, AcsTable, RankVector, WeightVector, rank_with_ties

# Canonical column order for evaluation tables.
RULE_ORDER = (
    "maximin",
    "maximax",
    "minimax_regret",
    "median",
    "lengths",
    "saw",
    "hurwicz",
    "promethee",
    "topsis",
)

SAW_NORMALIZATIONS = ("divide_by_max", "minmax")
TOPSIS_NORMALIZATIONS = ("vector", "minmax")


@dataclass(frozen=True)
class RuleParams:
    """Parameters that fully determine a rule run (recorded in manifests)."""

    hurwicz_alpha: float = 0.5
    saw_normalization: str = "divide_by_max"
    topsis_normalization: str = "vector"
    promethee_preference: str = "usual"
    lengths_scaling: str = "scale_max"

    def __post_init__(self):
        if not (0.0 <= self.hurwicz_alpha <= 1.0):
            raise ValueError(f"hurwicz alpha must be in [0, 1], got {self.hurwicz_alpha}")
        if self.saw_normalization not in SAW_NORMALIZATIONS:
            raise ValueError(f"unknown SAW normalization {self.saw_normalization!r}")
        if self.topsis_normalization not in TOPSIS_NORMALIZATIONS:
            raise ValueError(f"unknown TOPSIS normalization {self.topsis_normalization!r}")
        if self.promethee_preference != "usual":
            raise ValueError(f"unknown PROMETHEE preference function {self.promethee_preference!r}")
        if self.lengths_scaling != "scale_max":
            raise ValueError(f"unknown lengths scaling {self.lengths_scaling!r}")

    def as_dict(self) -> dict:
        return {
            "hurwicz_alpha": self.hurwicz_alpha,
            "saw_normalization": self.saw_normalization,
            "topsis_normalization": self.topsis_normalization,
            "promethee_preference": self.promethee_preference,
            "lengths_scaling": self.lengths_scaling,
        }


@dataclass(frozen=True)
class RuleResult:
    """Output of one decision rule on one table."""

    rule_id: str
    raw_values: tuple[float, ...]
    ranks: RankVector
    params: Mapping[str, object]


@dataclass(frozen=True, eq=False)
class EvaluationTable:
    """Per-rule rank columns for one set of alternatives (the E table)."""

    alternative_ids: tuple[int, ...]
    alternative_names: tuple[str, ...]
    rules: tuple[str, ...]
    columns: np.ndarray  # m x len(rules); rank values when engine-produced
    results: tuple[RuleResult, ...] = ()
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        cols = np.array(self.columns, dtype=float, copy=True)
        if cols.shape != (len(self.alternative_ids), len(self.rules)):
            raise ValueError(
                f"column grid shape {cols.shape} does not match "
                f"{len(self.alternative_ids)} alternatives x {len(self.rules)} rules"
            )
        if len(self.alternative_names) != len(self.alternative_ids):
            raise ValueError("alternative name list length mismatch")
        cols.flags.writeable = False
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "alternative_ids", tuple(self.alternative_ids))
        object.__setattr__(self, "alternative_names", tuple(str(s) for s in self.alternative_names))
        object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def m(self) -> int:
        return len(self.alternative_ids)

    def rule_index(self, rule_id: str) -> int:
        try:
            return self.rules.index(rule_id)
        except ValueError:
            raise KeyError(f"rule {rule_id!r} not present in evaluation table") from None

    def column(self, rule_id: str) -> np.ndarray:
        return self.columns[:, self.rule_index(rule_id)]

    def descending_order(self, rule_id: str) -> list[int]:
        """Alternative ids best-first under one rule, stable on id."""
        col = self.column(rule_id)
        pairs = sorted(zip(col, self.alternative_ids), key=lambda p: (-p[0], p[1]))
        return [i for _, i in pairs]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EvaluationTable):
            return NotImplemented
        return (
            self.alternative_ids == other.alternative_ids
            and self.alternative_names == other.alternative_names
            and self.rules == other.rules
            and np.array_equal(self.columns, other.columns)
        )


def _check_weights(table: AcsTable, weights: WeightVector) -> np.ndarray:
    if len(weights) != table.n:
        raise ValueError(
            f"weight vector length {len(weights)} does not match {table.n} criteria"
        )
    return weights.normalized()


def _result(rule_id: str, table: AcsTable, raw: np.ndarray,
            higher_is_better: bool, **params) -> RuleResult:
    ranks = rank_with_ties(raw, higher_is_better=higher_is_better)
    params = {"orientation": "higher" if higher_is_better else "lower", **params}
    return RuleResult(rule_id, tuple(float(v) for v in raw), ranks, params)


def maximin(table: AcsTable) -> RuleResult:
    """Worst-case returns: value_i = min_j s_ij, higher is better."""
    return _result("maximin", table, table.scores.min(axis=1), True)


def maximax(table: AcsTable) -> RuleResult:
    """Best-case returns: value_i = max_j s_ij, higher is better."""
    return _result("maximax", table, table.scores.max(axis=1), True)


def minimax_regret(table: AcsTable) -> RuleResult:
    """Worst-case shortfall from each column's best score; lower is better."""
    regret = table.scores.max(axis=0)[np.newaxis, :] - table.scores
    return _result("minimax_regret", table, regret.max(axis=1), False)


def median_rule(table: AcsTable) -> RuleResult:
    """Row medians (mean of the middle two for an even criterion count)."""
    return _result("median", table, np.median(table.scores, axis=1), True)


def lengths_rule(table: AcsTable) -> RuleResult:
    """Euclidean norm of each row after dividing columns by their scale max.

    Convention recorded in params; the rule name alone does not pin a
    formula.
    """
    scale_max = np.array([c.scale_max for c in table.criteria], dtype=float)
    scaled = table.scores / scale_max[np.newaxis, :]
    raw = np.sqrt((scaled ** 2).sum(axis=1))
    return _result("lengths", table, raw, True, scaling="scale_max")


def _saw_scaled(table: AcsTable, normalization: str) -> np.ndarray:
    scores = table.scores
    scaled = np.empty_like(scores)
    for j, crit in enumerate(table.criteria):
        col = scores[:, j]
        if normalization == "divide_by_max":
            if crit.direction == COST:
                if np.any(col == 0.0):
                    raise DegenerateColumnError(
                        crit.id, f"cost column {crit.id!r} contains a zero score")
                scaled[:, j] = col.min() / col
            else:
                cmax = col.max()
                if cmax == 0.0:
                    raise DegenerateColumnError(
                        crit.id, f"benefit column {crit.id!r} has maximum 0")
                scaled[:, j] = col / cmax
        else:  # minmax
            span = col.max() - col.min()
            if span == 0.0:
                # constant column carries no preference information
                scaled[:, j] = 0.5
                continue
            up = (col - col.min()) / span
            scaled[:, j] = 1.0 - up if crit.direction == COST else up
    return scaled


def saw(table: AcsTable, weights: WeightVector,
        normalization: str = "divide_by_max") -> RuleResult:
    """Simple additive weighting over column-scaled scores."""
    if normalization not in SAW_NORMALIZATIONS:
        raise ValueError(f"unknown SAW normalization {normalization!r}")
    w = _check_weights(table, weights)
    scaled = _saw_scaled(table, normalization)
    raw = scaled @ w
    return _result("saw", table, raw, True, normalization=normalization)


def hurwicz(table: AcsTable, alpha: float = 0.5) -> RuleResult:
    """Optimism-weighted blend: alpha * row max + (1 - alpha) * row min."""
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"hurwicz alpha must be in [0, 1], got {alpha}")
    raw = alpha * table.scores.max(axis=1) + (1.0 - alpha) * table.scores.min(axis=1)
    return _result("hurwicz", table, raw, True, alpha=alpha)


def promethee2(table: AcsTable, weights: WeightVector) -> RuleResult:
    """PROMETHEE II complete ranking with the usual preference function.

    pi(a, b) sums the normalized weights of criteria where a strictly
    beats b; the net flow phi(a) averages pi(a, .) - pi(., a) over the
    other m - 1 alternatives. Cost criteria invert the comparison.
    """
    if table.m < 2:
        raise PolicyRankError("PROMETHEE II needs at least two alternatives")
    w = _check_weights(table, weights)
    scores = table.scores
    m = table.m
    pi = np.zeros((m, m))
    for j, crit in enumerate(table.criteria):
        col = scores[:, j]
        beats = col[:, np.newaxis] > col[np.newaxis, :]
        if crit.direction == COST:
            beats = beats.T
        pi += w[j] * beats
    np.fill_diagonal(pi, 0.0)
    phi = (pi.sum(axis=1) - pi.sum(axis=0)) / (m - 1)
    return _result("promethee", table, phi, True, preference="usual")


def topsis(table: AcsTable, weights: WeightVector,
           normalization: str = "vector") -> RuleResult:
    """Closeness to the ideal / distance from the anti-ideal solution.

    Vector normalization divides each column by its Euclidean norm; the
    ideal point takes the column max for benefit criteria and the min for
    cost criteria. Closeness C = d- / (d+ + d-), with the degenerate
    d+ + d- = 0 case pinned to 0.5.
    """
    if normalization not in TOPSIS_NORMALIZATIONS:
        raise ValueError(f"unknown TOPSIS normalization {normalization!r}")
    w = _check_weights(table, weights)
    scores = table.scores
    if normalization == "vector":
        norms = np.sqrt((scores ** 2).sum(axis=0))
        for j, crit in enumerate(table.criteria):
            if norms[j] == 0.0:
                raise DegenerateColumnError(
                    crit.id, f"column {crit.id!r} is all zero; vector normalization undefined")
        normalized = scores / norms[np.newaxis, :]
    else:  # minmax
        span = scores.max(axis=0) - scores.min(axis=0)
        for j, crit in enumerate(table.criteria):
            if span[j] == 0.0:
                raise DegenerateColumnError(
                    crit.id, f"column {crit.id!r} is constant; min-max normalization undefined")
        normalized = (scores - scores.min(axis=0)[np.newaxis, :]) / span[np.newaxis, :]
    weighted = normalized * w[np.newaxis, :]
    ideal = np.empty(table.n)
    anti = np.empty(table.n)
    for j, crit in enumerate(table.criteria):
        col = weighted[:, j]
        if crit.direction == COST:
            ideal[j], anti[j] = col.min(), col.max()
        else:
            ideal[j], anti[j] = col.max(), col.min()
    d_pos = np.sqrt(((weighted - ideal) ** 2).sum(axis=1))
    d_neg = np.sqrt(((weighted - anti) ** 2).sum(axis=1))
    total = d_pos + d_neg
    closeness = np.where(total == 0.0, 0.5, np.divide(
        d_neg, total, out=np.full_like(d_neg, 0.5), where=total != 0.0))
    return _result("topsis", table, closeness, True, normalization=normalization)


_RULE_FUNCS = {
    "maximin": lambda table, weights, params: maximin(table),
    "maximax": lambda table, weights, params: maximax(table),
    "minimax_regret": lambda table, weights, params: minimax_regret(table),
    "median": lambda table, weights, params: median_rule(table),
    "lengths": lambda table, weights, params: lengths_rule(table),
    "saw": lambda table, weights, params: saw(table, weights, params.saw_normalization),
    "hurwicz": lambda table, weights, params: hurwicz(table, params.hurwicz_alpha),
    "promethee": lambda table, weights, params: promethee2(table, weights),
    "topsis": lambda table, weights, params: topsis(table, weights, params.topsis_normalization),
}


def run_rule(rule_id: str, table: AcsTable, weights: WeightVector,
             params: RuleParams) -> RuleResult:
    """Run one rule by id; errors are annotated with the rule id."""
    if rule_id not in _RULE_FUNCS:
        raise ValueError(f"unknown rule id {rule_id!r}")
    # PROMETHEE's net flow is undefined for a single alternative, but the
    # trivial ranking is not: a lone alternative is rank 1 under any rule.
    if rule_id == "promethee" and table.m == 1:
        return RuleResult("promethee", (0.0,), RankVector((1.0,)),
                          {"orientation": "higher", "preference": "usual",
                           "degenerate_single_alternative": True})
    try:
        return _RULE_FUNCS[rule_id](table, weights, params)
    except PolicyRankError as exc:
        exc.rule_id = rule_id  # type: ignore[attr-defined]
        exc.args = (f"[{rule_id}] {exc.args[0]}",) + exc.args[1:]
        raise


def run_all_rules(table: AcsTable, weights: WeightVector | None = None,
                  params: RuleParams | None = None,
                  rules: Sequence[str] = RULE_ORDER) -> EvaluationTable:
    """Evaluate the selected rules and assemble their rank columns.

    Rules always come out in canonical order regardless of the order
    requested.
    """
    weights = weights if weights is not None else WeightVector.equal(table.n)
    params = params if params is not None else RuleParams()
    unknown = [r for r in rules if r not in RULE_ORDER]
    if unknown:
        raise ValueError(f"unknown rule ids: {unknown}")
    selected = [r for r in RULE_ORDER if r in set(rules)]
    if not selected:
        raise ValueError("no rules selected")
    results = [run_rule(rule_id, table, weights, params) for rule_id in selected]
    columns = np.column_stack([r.ranks.as_array() for r in results])
    return EvaluationTable(
        alternative_ids=table.alternative_ids,
        alternative_names=tuple(a.name for a in table.alternatives),
        rules=tuple(selected),
        columns=columns,
        results=tuple(results),
        params=params.as_dict(),
    )
