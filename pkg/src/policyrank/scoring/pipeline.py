"""Scoring pipeline: one transcript per attempt, one score per cell.

Transcripts are the audit trail: every raw response is retained
verbatim, and the archive doubles as the resumable checkpoint. A cell
whose (model, prompt) already has a parsed transcript in the archive is
replayed from cache without a provider call, which is what makes rerun
after an aborted run both cheap and byte-deterministic.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from ..errors import PartialRunError, ProviderError
from ..model import AcsTable, Alternative, Criterion, validate_table
from .parser import parse_rating
from .providers import (ProviderRateLimit, ProviderRequest, ProviderTransportError)
from .template import PromptTemplate, render_prompt


@dataclass(frozen=True)
class PromptTranscript:
    """Record of one provider attempt for one table cell."""

    alternative_id: int
    criterion_id: str
    rendered_prompt: str
    raw_response: str
    parsed_rating: float | None
    parse_rule: str | None
    parse_detail: str | None
    attempt: int
    provider_metadata: Mapping[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "alternative_id": self.alternative_id,
            "criterion_id": self.criterion_id,
            "rendered_prompt": self.rendered_prompt,
            "raw_response": self.raw_response,
            "parsed_rating": self.parsed_rating,
            "parse_rule": self.parse_rule,
            "parse_detail": self.parse_detail,
            "attempt": self.attempt,
            "provider_metadata": dict(self.provider_metadata),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "PromptTranscript":
        return cls(
            alternative_id=int(data["alternative_id"]),
            criterion_id=str(data["criterion_id"]),
            rendered_prompt=str(data["rendered_prompt"]),
            raw_response=str(data["raw_response"]),
            parsed_rating=(None if data.get("parsed_rating") is None
                           else float(data["parsed_rating"])),
            parse_rule=data.get("parse_rule"),
            parse_detail=data.get("parse_detail"),
            attempt=int(data.get("attempt", 1)),
            provider_metadata=dict(data.get("provider_metadata", {})),
        )


class TranscriptArchive:
    """Append-only newline-delimited JSON store of transcripts.

    ``lookup`` returns the last *parsed* transcript for a (model, prompt)
    pair; unparsed attempts stay on record but do not satisfy a cell, so
    a rerun gets another chance at them.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.records: list[PromptTranscript] = []
        self._parsed_index: dict[tuple[str, str], PromptTranscript] = {}
        if self.path is not None and self.path.exists():
            with open(self.path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if line:
                        self._index(PromptTranscript.from_dict(json.loads(line)))

    def _index(self, transcript: PromptTranscript) -> None:
        self.records.append(transcript)
        if transcript.parsed_rating is not None:
            model = str(transcript.provider_metadata.get("model", ""))
            self._parsed_index[(model, transcript.rendered_prompt)] = transcript

    def lookup(self, model: str, prompt: str) -> PromptTranscript | None:
        return self._parsed_index.get((model, prompt))

    def append(self, transcripts: Sequence[PromptTranscript]) -> None:
        """Record transcripts, persisting them if the archive is file-backed."""
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                for t in transcripts:
                    handle.write(json.dumps(t.to_dict(), sort_keys=True) + "\n")
        for t in transcripts:
            self._index(t)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class RetryPolicy:
    """Attempt budget and bounded exponential backoff for one cell."""

    max_attempts: int = 3
    backoff_base: float = 0.5
    backoff_cap: float = 8.0
    sleep: Callable[[float], None] = time.sleep

    def backoff(self, attempt: int) -> float:
        return min(self.backoff_cap, self.backoff_base * (2 ** (attempt - 1)))


@dataclass(frozen=True)
class CellOutcome:
    """Attempt chain for one cell plus whether it came from the cache."""

    transcripts: tuple[PromptTranscript, ...]  # newly produced this run
    final: PromptTranscript
    from_cache: bool


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def score_cell(provider, template: PromptTemplate, alternative: Alternative,
               criterion: Criterion, retry: RetryPolicy | None = None,
               archive: TranscriptArchive | None = None,
               decoding_params: Mapping[str, object] | None = None) -> CellOutcome:
    """Obtain one rating, retrying on transport trouble and parse misses.

    Every attempt yields a transcript; the final transcript carries the
    parsed rating or the unparsed marker once attempts are exhausted.
    Transport failure after the attempt budget raises ProviderError with
    the partial attempt chain attached.
    """
    retry = retry or RetryPolicy()
    decoding_params = dict(decoding_params or {})
    prompt = render_prompt(template, alternative, criterion)
    if archive is not None:
        cached = archive.lookup(provider.model, prompt)
        if cached is not None:
            return CellOutcome((), cached, True)

    request = ProviderRequest(model=provider.model, prompt=prompt, params=decoding_params)
    chain: list[PromptTranscript] = []
    deterministic = getattr(provider, "deterministic", False)
    last_error: Exception | None = None
    for attempt in range(1, retry.max_attempts + 1):
        try:
            response = provider.complete(request)
        except ProviderRateLimit as exc:
            last_error = exc
            if attempt < retry.max_attempts:
                retry.sleep(retry.backoff(attempt))
            continue
        except ProviderTransportError as exc:
            last_error = exc
            if attempt < retry.max_attempts:
                retry.sleep(retry.backoff(attempt))
            continue
        parsed = parse_rating(response.text, template.scale_min, template.scale_max)
        metadata = dict(response.metadata)
        metadata.setdefault("request_params", decoding_params)
        if not deterministic:
            metadata.setdefault("timestamp", _now_iso())
        transcript = PromptTranscript(
            alternative_id=alternative.id,
            criterion_id=criterion.id,
            rendered_prompt=prompt,
            raw_response=response.text,
            parsed_rating=parsed.value,
            parse_rule=parsed.rule,
            parse_detail=parsed.detail,
            attempt=attempt,
            provider_metadata=metadata,
        )
        chain.append(transcript)
        if parsed.parsed:
            return CellOutcome(tuple(chain), transcript, False)
    if chain:
        # every attempt got a response, none parsed: the unparsed marker
        return CellOutcome(tuple(chain), chain[-1], False)
    raise ProviderError(
        f"cell ({alternative.id}, {criterion.id}): transport failed after "
        f"{retry.max_attempts} attempts: {last_error}", transcript=chain)


@dataclass(frozen=True)
class ScoreRun:
    """Outcome of scoring a full alternatives x criteria grid.

    ``table`` is None when any cell stayed unparsed: a performance table
    never carries holes, so those cells become the human-entry worklist
    instead.
    """

    table: AcsTable | None
    transcripts: tuple[PromptTranscript, ...]
    worklist: tuple[tuple[int, str], ...]


def score_table(provider, template: PromptTemplate,
                alternatives: Sequence[Alternative], criteria: Sequence[Criterion],
                concurrency_limit: int = 4, retry: RetryPolicy | None = None,
                archive: TranscriptArchive | None = None,
                allow_partial: bool = False,
                decoding_params: Mapping[str, object] | None = None) -> ScoreRun:
    """Score every alternative x criterion pair into a performance table.

    Provider calls run under a bounded thread pool; new transcripts are
    flushed to the archive in row-major (alternative, criterion, attempt)
    order, so two identical runs produce identical bytes. On a hard
    failure the completed cells are flushed first, making the archive a
    resumable checkpoint.
    """
    if not alternatives or not criteria:
        raise ValueError("score_table needs at least one alternative and one criterion")
    for crit in criteria:
        if (crit.scale_min, crit.scale_max) != (template.scale_min, template.scale_max):
            raise ValueError(
                f"criterion {crit.id!r} scale [{crit.scale_min}, {crit.scale_max}] does not "
                f"match template scale [{template.scale_min}, {template.scale_max}]")
    archive = archive if archive is not None else TranscriptArchive()
    cells = [(i, j) for i in range(len(alternatives)) for j in range(len(criteria))]

    def work(cell):
        i, j = cell
        return score_cell(provider, template, alternatives[i], criteria[j],
                          retry=retry, archive=archive, decoding_params=decoding_params)

    outcomes: dict[tuple[int, int], CellOutcome] = {}
    failure: ProviderError | None = None
    with ThreadPoolExecutor(max_workers=max(1, concurrency_limit)) as pool:
        futures = {cell: pool.submit(work, cell) for cell in cells}
        for cell in cells:
            try:
                outcomes[cell] = futures[cell].result()
            except ProviderError as exc:
                failure = failure or exc

    new_transcripts = [t for cell in cells if cell in outcomes
                       for t in outcomes[cell].transcripts]
    archive.append(new_transcripts)
    if failure is not None:
        raise failure

    worklist = [
        (alternatives[i].id, criteria[j].id)
        for (i, j) in cells if outcomes[(i, j)].final.parsed_rating is None
    ]
    all_transcripts = tuple(
        t for cell in cells
        for t in (outcomes[cell].transcripts or (outcomes[cell].final,))
    )
    if worklist and not allow_partial:
        cells_text = ", ".join(f"({a}, {c})" for a, c in worklist)
        raise PartialRunError(
            f"{len(worklist)} cell(s) unparsed after retries: {cells_text}",
            unparsed_cells=worklist)
    if worklist:
        return ScoreRun(table=None, transcripts=all_transcripts, worklist=tuple(worklist))

    scores = np.empty((len(alternatives), len(criteria)))
    for (i, j) in cells:
        scores[i, j] = outcomes[(i, j)].final.parsed_rating
    provenance = np.full(scores.shape, "llm", dtype=object)
    table = AcsTable(tuple(alternatives), tuple(criteria), scores, provenance)
    validate_table(table).raise_if_invalid()
    return ScoreRun(table=table, transcripts=all_transcripts, worklist=())
