"""Core domain types: performance tables, criteria, weights, and rankings.

A performance table is a dense alternatives x criteria grid of numeric
scores. Everything downstream (decision rules, aggregation, the service)
consumes these types; they are immutable, so operations build new tables
instead of mutating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import TableValidationError, UnknownCriterionError

BENEFIT = "benefit"
COST = "cost"

# Per-cell score provenance tags.
PROVENANCE_TAGS = ("informed_assessment", "llm", "file", "manual_edit")


@dataclass(frozen=True)
class Criterion:
    """One evaluation dimension (a table column).

    ``direction`` says whether larger scores are better (benefit) or worse
    (cost). ``prompt_text`` is the prose pasted verbatim into LLM queries;
    it may be empty for criteria that are never scored by a model.
    """

    id: str
    name: str
    scale_min: float
    scale_max: float
    direction: str = BENEFIT
    description: str = ""
    prompt_text: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValueError("criterion id must be non-empty")
        if self.direction not in (BENEFIT, COST):
            raise ValueError(f"criterion {self.id!r}: direction must be 'benefit' or 'cost'")
        if not (self.scale_min < self.scale_max):
            raise ValueError(
                f"criterion {self.id!r}: scale_min must be < scale_max "
                f"(got {self.scale_min} >= {self.scale_max})"
            )


@dataclass(frozen=True)
class Alternative:
    """One candidate under consideration (a table row)."""

    id: int
    name: str
    description: str = ""


@dataclass(frozen=True)
class Violation:
    """A single invariant violation located at a table cell (or the table)."""

    message: str
    alternative_id: int | None = None
    criterion_id: str | None = None

    def locus(self) -> str:
        if self.alternative_id is None and self.criterion_id is None:
            return "table"
        return f"({self.alternative_id}, {self.criterion_id})"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def raise_if_invalid(self) -> None:
        if not self.ok:
            lines = [f"{v.locus()}: {v.message}" for v in self.violations]
            raise TableValidationError(
                "table validation failed:\n  " + "\n  ".join(lines), self.violations
            )


def _as_readonly(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class AcsTable:
    """Alternatives x criteria x scores performance table.

    The grid is dense by construction: every alternative has exactly one
    score per criterion, and ingestion fails rather than imputing a
    missing cell. ``provenance`` tags each cell with where its score came
    from (informed_assessment, llm, file, manual_edit).
    """

    alternatives: tuple[Alternative, ...]
    criteria: tuple[Criterion, ...]
    scores: np.ndarray
    provenance: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        alternatives = tuple(self.alternatives)
        criteria = tuple(self.criteria)
        object.__setattr__(self, "alternatives", alternatives)
        object.__setattr__(self, "criteria", criteria)
        if len(alternatives) < 1:
            raise TableValidationError("table must contain at least one alternative")
        if len(criteria) < 1:
            raise TableValidationError("table must contain at least one criterion")
        scores = np.asarray(self.scores, dtype=float)
        if scores.shape != (len(alternatives), len(criteria)):
            raise TableValidationError(
                f"score grid shape {scores.shape} does not match "
                f"{len(alternatives)} alternatives x {len(criteria)} criteria"
            )
        object.__setattr__(self, "scores", _as_readonly(scores))
        prov = self.provenance
        if prov is None:
            prov = np.full(scores.shape, "file", dtype=object)
        else:
            prov = np.array(prov, dtype=object, copy=True)
            if prov.shape != scores.shape:
                raise TableValidationError("provenance grid shape does not match score grid")
        prov.flags.writeable = False
        object.__setattr__(self, "provenance", prov)

    # -- shape and lookup helpers ------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.alternatives)

    @property
    def n(self) -> int:
        return len(self.criteria)

    @property
    def alternative_ids(self) -> tuple[int, ...]:
        return tuple(a.id for a in self.alternatives)

    @property
    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.criteria)

    def alternative_index(self, alternative_id: int) -> int:
        for i, alt in enumerate(self.alternatives):
            if alt.id == alternative_id:
                return i
        raise KeyError(f"unknown alternative id: {alternative_id!r}")

    def criterion_index(self, criterion_id: str) -> int:
        for j, crit in enumerate(self.criteria):
            if crit.id == criterion_id:
                return j
        raise UnknownCriterionError(criterion_id)

    def score(self, alternative_id: int, criterion_id: str) -> float:
        return float(self.scores[self.alternative_index(alternative_id),
                                 self.criterion_index(criterion_id)])

    def row(self, alternative_id: int) -> np.ndarray:
        return self.scores[self.alternative_index(alternative_id)]

    def column(self, criterion_id: str) -> np.ndarray:
        return self.scores[:, self.criterion_index(criterion_id)]

    # -- functional updates ------------------------------------------------------

    def with_score(self, alternative_id: int, criterion_id: str, value: float,
                   provenance: str = "manual_edit") -> "AcsTable":
        """Return a new table with one cell replaced."""
        i = self.alternative_index(alternative_id)
        j = self.criterion_index(criterion_id)
        scores = np.array(self.scores, copy=True)
        scores[i, j] = value
        prov = np.array(self.provenance, copy=True)
        prov[i, j] = provenance
        return AcsTable(self.alternatives, self.criteria, scores, prov)

    def with_provenance(self, tag: str) -> "AcsTable":
        prov = np.full(self.scores.shape, tag, dtype=object)
        return AcsTable(self.alternatives, self.criteria, self.scores, prov)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AcsTable):
            return NotImplemented
        return (
            self.alternatives == other.alternatives
            and self.criteria == other.criteria
            and np.array_equal(self.scores, other.scores)
        )


def validate_table(table: AcsTable) -> ValidationReport:
    """Check every table invariant; violations are report entries, not errors.

    The report is empty iff the table is valid: unique ids, finite scores,
    and every score inside its criterion's scale bounds.
    """
    violations: list[Violation] = []

    seen_alt: set[int] = set()
    for alt in table.alternatives:
        if alt.id in seen_alt:
            violations.append(Violation(f"duplicate alternative id {alt.id}", alternative_id=alt.id))
        seen_alt.add(alt.id)
    seen_crit: set[str] = set()
    for crit in table.criteria:
        if crit.id in seen_crit:
            violations.append(Violation(f"duplicate criterion id {crit.id!r}", criterion_id=crit.id))
        seen_crit.add(crit.id)

    # one scale per table: scores from differently-scaled sources are
    # compared at the ranking level, never mixed into one grid
    scales = {(c.scale_min, c.scale_max) for c in table.criteria}
    if len(scales) > 1:
        violations.append(Violation(
            f"mixed scale bounds within one table: {sorted(scales)}"))

    for i, alt in enumerate(table.alternatives):
        for j, crit in enumerate(table.criteria):
            value = table.scores[i, j]
            if not math.isfinite(value):
                violations.append(Violation(
                    f"score {value} is not finite",
                    alternative_id=alt.id, criterion_id=crit.id,
                ))
            elif not (crit.scale_min <= value <= crit.scale_max):
                violations.append(Violation(
                    f"score {value} outside scale [{crit.scale_min}, {crit.scale_max}]",
                    alternative_id=alt.id, criterion_id=crit.id,
                ))
    return ValidationReport(tuple(violations))


def subset_columns(table: AcsTable, criterion_ids: Sequence[str]) -> AcsTable:
    """New table restricted to the given criteria, alternative order unchanged."""
    indices = [table.criterion_index(cid) for cid in criterion_ids]
    criteria = tuple(table.criteria[j] for j in indices)
    scores = table.scores[:, indices]
    prov = np.array(table.provenance, dtype=object)[:, indices]
    return AcsTable(table.alternatives, criteria, scores, prov)


@dataclass(frozen=True)
class WeightVector:
    """Per-criterion weights; stored form unconstrained, consumers normalize."""

    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("weight vector must be non-empty")
        if any(v < 0 or not math.isfinite(v) for v in values):
            raise ValueError("weights must be finite and >= 0")
        if not any(v > 0 for v in values):
            raise ValueError("at least one weight must be > 0")

    @classmethod
    def equal(cls, n: int) -> "WeightVector":
        return cls(tuple(1.0 for _ in range(n)))

    def __len__(self) -> int:
        return len(self.values)

    def normalized(self) -> np.ndarray:
        arr = np.asarray(self.values, dtype=float)
        return arr / arr.sum()


@dataclass(frozen=True)
class RankVector:
    """Average-tie ranks over one set of alternatives.

    Fixed orientation: larger rank = more preferred. With average-tie
    ranking the ranks of m alternatives always sum to m(m+1)/2.
    """

    ranks: tuple[float, ...]

    def __post_init__(self):
        ranks = tuple(float(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        m = len(ranks)
        if m == 0:
            raise ValueError("rank vector must be non-empty")
        if min(ranks) < 1.0 or max(ranks) > m:
            raise ValueError(f"ranks must lie in [1, {m}]")
        # average-tie ranks are multiples of 0.5, so this sum is exact
        if sum(ranks) != m * (m + 1) / 2:
            raise ValueError(
                f"ranks must sum to m(m+1)/2 = {m * (m + 1) / 2} (got {sum(ranks)})"
            )

    def __len__(self) -> int:
        return len(self.ranks)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.ranks, dtype=float)

    def descending_order(self, ids: Sequence[int]) -> list[int]:
        """Ids sorted best-first (largest rank first), stable on id for ties."""
        if len(ids) != len(self.ranks):
            raise ValueError("id list length does not match rank vector")
        return [i for _, i in sorted(zip(self.ranks, ids), key=lambda p: (-p[0], p[1]))]


def rank_with_ties(values: Iterable[float], higher_is_better: bool = True) -> RankVector:
    """Average-tie ranking: the most preferred value receives rank m.

    When ``higher_is_better`` the largest value gets rank m; ties receive
    the mean of the integer ranks they span.
    """
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise ValueError("cannot rank an empty value list")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise ValueError(f"non-finite value at index {int(bad[0])}")
    keyed = arr if higher_is_better else -arr
    order = np.argsort(keyed, kind="stable")
    ranks = np.empty(arr.size, dtype=float)
    i = 0
    sorted_keys = keyed[order]
    while i < arr.size:
        j = i
        while j + 1 < arr.size and sorted_keys[j + 1] == sorted_keys[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return RankVector(tuple(ranks))
