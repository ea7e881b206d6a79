"""Exception taxonomy shared across the engine.

The classes map onto the CLI exit codes: validation problems (1),
file/format problems (2), provider transport problems (3), and
partial scoring runs (4).
"""

from __future__ import annotations


class PolicyRankError(Exception):
    """Base class for all engine errors."""


class TableValidationError(PolicyRankError):
    """A performance table (or an edit to one) violates its invariants.

    Carries the individual violations so callers can report cell
    coordinates instead of a bare message.
    """

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class DegenerateColumnError(PolicyRankError):
    """A criterion column cannot be normalized (e.g. all-zero column)."""

    def __init__(self, criterion_id: str, message: str):
        super().__init__(message)
        self.criterion_id = criterion_id


class UnknownCriterionError(PolicyRankError):
    """A requested criterion id does not exist in the table."""

    def __init__(self, criterion_id: str):
        super().__init__(f"unknown criterion id: {criterion_id!r}")
        self.criterion_id = criterion_id


class FormatError(PolicyRankError):
    """A file does not conform to its documented format.

    ``locus`` is a human-readable coordinate such as ``row 3, column Q2``.
    """

    def __init__(self, message: str, locus: str | None = None):
        super().__init__(message if locus is None else f"{message} ({locus})")
        self.locus = locus


class ProviderError(PolicyRankError):
    """Transport-level failure talking to an LLM provider, after retries."""

    def __init__(self, message: str, transcript=None):
        super().__init__(message)
        self.transcript = transcript


class PartialRunError(PolicyRankError):
    """A scoring run finished with unparsable cells and no allow-partial flag."""

    def __init__(self, message: str, unparsed_cells=()):
        super().__init__(message)
        self.unparsed_cells = list(unparsed_cells)
