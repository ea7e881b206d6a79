"""Session-scoped HTTP facade for the deliberation loop.

A session wraps one working performance table plus weights and rule
parameters. Every mutating call returns the full recomputed ranking
payload, so clients render rankings without doing any ranking math of
their own. Edits append to a per-session log that replays
deterministically onto the session's initial table.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping, Sequence

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import storage
from .aggregate import aggregate_table, compare_rankings
from .errors import DegenerateColumnError, PolicyRankError, UnknownCriterionError
from .model import (AcsTable, Alternative, Criterion, WeightVector,
                    subset_columns)
from .rules import RULE_ORDER, RuleParams, run_all_rules
from .selection import resolve_criteria_subset, resolve_rules


class ServiceRefusal(Exception):
    """A request the engine refuses; carries the structured error body."""

    def __init__(self, status: int, code: str, message: str, locus: str | None = None):
        super().__init__(message)
        self.status = status
        self.body = {"code": code, "message": message, "locus": locus}


@dataclass
class EditRecord:
    seq: int
    kind: str                      # "cell" | "weights"
    actor: str
    timestamp: str
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, "actor": self.actor,
                "timestamp": self.timestamp, "payload": self.payload}


@dataclass
class Session:
    id: str
    initial_table: AcsTable
    table: AcsTable
    weights: dict[str, float]
    params: RuleParams = field(default_factory=RuleParams)
    edit_log: list[EditRecord] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def weight_vector(self, criterion_ids: Sequence[str]) -> WeightVector:
        return WeightVector(tuple(self.weights[cid] for cid in criterion_ids))


def apply_edit(table: AcsTable, weights: dict[str, float],
               record: EditRecord) -> tuple[AcsTable, dict[str, float]]:
    """Apply one edit-log record; the replay primitive."""
    if record.kind == "cell":
        payload = record.payload
        table = table.with_score(int(payload["alternative_id"]),
                                 str(payload["criterion_id"]),
                                 float(payload["value"]))
    elif record.kind == "weights":
        weights = dict(weights)
        for cid, value in record.payload["weights"].items():
            weights[str(cid)] = float(value)
    else:
        raise ValueError(f"unknown edit kind {record.kind!r}")
    return table, weights


def replay_edit_log(initial_table: AcsTable, initial_weights: Mapping[str, float],
                    log: Sequence[EditRecord]) -> tuple[AcsTable, dict[str, float]]:
    table, weights = initial_table, dict(initial_weights)
    for record in log:
        table, weights = apply_edit(table, weights, record)
    return table, weights


def rankings_payload(session: Session, rules: Sequence[str] | None = None,
                     criteria: Sequence[str] | None = None) -> dict:
    """Compute the full payload the client renders: table, ranks, orders."""
    table = session.table
    criteria = list(criteria) if criteria is not None else list(table.criterion_ids)
    working = subset_columns(table, criteria)
    weights = session.weight_vector(criteria)
    rules = list(rules) if rules is not None else list(RULE_ORDER)
    try:
        etable = run_all_rules(working, weights, session.params, rules)
    except DegenerateColumnError as exc:
        raise ServiceRefusal(422, "degenerate_column", str(exc),
                             locus=exc.criterion_id) from exc
    agg = aggregate_table(etable)
    raw_by_rule = {r.rule_id: r.raw_values for r in etable.results}
    rows = []
    for i, aid in enumerate(etable.alternative_ids):
        rows.append({
            "id": aid,
            "name": etable.alternative_names[i],
            "ranks": {rule: etable.columns[i, k] for k, rule in enumerate(etable.rules)},
            "raw": {rule: raw_by_rule[rule][i] for rule in etable.rules},
        })
    order = {rule: etable.descending_order(rule) for rule in etable.rules}
    order["aggregate"] = list(agg.alternative_ids)
    return {
        "session_id": session.id,
        "table": {
            "alternatives": [{"id": a.id, "name": a.name} for a in table.alternatives],
            "criteria": [{
                "id": c.id, "name": c.name, "direction": c.direction,
                "scale_min": c.scale_min, "scale_max": c.scale_max,
            } for c in table.criteria],
            "scores": table.scores.tolist(),
            "provenance": [list(row) for row in table.provenance],
        },
        "weights": dict(session.weights),
        "params": session.params.as_dict(),
        "selection": {"rules": list(etable.rules), "criteria": criteria},
        "etable": {"rules": list(etable.rules), "rows": rows},
        "atable": {"rows": [
            {"id": aid, "name": name, "borda": b, "simple_median": med,
             "averaged_rank_median": arm}
            for aid, name, b, med, arm in agg.rows()
        ]},
        "order": order,
    }


def rank_deltas(before: dict, after: dict) -> list[dict]:
    """Per-(alternative, rule) rank changes between two payloads."""
    deltas = []
    before_rows = {row["id"]: row for row in before["etable"]["rows"]}
    for row in after["etable"]["rows"]:
        prior = before_rows.get(row["id"])
        if prior is None:
            continue
        for rule, rank in row["ranks"].items():
            old = prior["ranks"].get(rule)
            if old is not None and old != rank:
                deltas.append({"alternative_id": row["id"], "rule": rule,
                               "before": old, "after": rank})
    return deltas


# ---------------------------------------------------------------------------
# request bodies
# ---------------------------------------------------------------------------

class InlineTable(BaseModel):
    alternatives: list[dict]
    criteria: list[dict]
    scores: list[list[float]]


class CreateSession(BaseModel):
    fixture: str | None = None
    table: InlineTable | None = None


class CellEdit(BaseModel):
    alternative_id: int
    criterion_id: str
    value: float
    actor: str = "anonymous"


class WeightsEdit(BaseModel):
    weights: dict[str, float]
    actor: str = "anonymous"


class CompareBody(BaseModel):
    ranking: list[int]
    rule: str = "topsis"


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ServiceRefusal(404, "unknown_session", f"no session {session_id!r}")
        return session


def _table_from_inline(spec: InlineTable) -> AcsTable:
    alternatives = tuple(Alternative(id=int(a["id"]), name=str(a.get("name", a["id"])),
                                     description=str(a.get("description", "")))
                         for a in spec.alternatives)
    criteria = tuple(Criterion(
        id=str(c["id"]), name=str(c.get("name", c["id"])),
        scale_min=float(c["scale_min"]), scale_max=float(c["scale_max"]),
        direction=str(c.get("direction", "benefit")),
        description=str(c.get("description", "")),
        prompt_text=str(c.get("prompt_text", "")),
    ) for c in spec.criteria)
    table = AcsTable(alternatives, criteria, np.asarray(spec.scores, dtype=float))
    from .model import validate_table
    report = validate_table(table)
    if not report.ok:
        first = report.violations[0]
        raise ServiceRefusal(422, "invalid_table", first.message, locus=first.locus())
    return table


def create_app() -> FastAPI:
    app = FastAPI(title="policyrank service", version=storage.TOOL_VERSION)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    store = SessionStore()
    app.state.store = store

    @app.exception_handler(ServiceRefusal)
    async def refusal_handler(_request: Request, exc: ServiceRefusal):
        return JSONResponse(status_code=exc.status, content=exc.body)

    @app.exception_handler(PolicyRankError)
    async def engine_error_handler(_request: Request, exc: PolicyRankError):
        locus = getattr(exc, "criterion_id", None)
        return JSONResponse(status_code=422, content={
            "code": type(exc).__name__, "message": str(exc), "locus": locus})

    @app.exception_handler(ValueError)
    async def value_error_handler(_request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={
            "code": "invalid_request", "message": str(exc), "locus": None})

    @app.get("/health")
    def health():
        return {"ok": True, "version": storage.TOOL_VERSION}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSession):
        if (body.fixture is None) == (body.table is None):
            raise ServiceRefusal(422, "bad_request",
                                 "provide exactly one of 'fixture' or 'table'")
        if body.fixture is not None:
            try:
                table = storage.load_fixture_table(body.fixture)
            except KeyError as exc:
                raise ServiceRefusal(422, "unknown_fixture", str(exc)) from exc
        else:
            table = _table_from_inline(body.table)
        session = Session(
            id=uuid.uuid4().hex,
            initial_table=table,
            table=table,
            weights={cid: 1.0 for cid in table.criterion_ids},
        )
        store.add(session)
        with session.lock:
            return rankings_payload(session)

    @app.get("/sessions/{session_id}/rankings")
    def get_rankings(session_id: str, rules: str = "all", criteria: str = "all"):
        session = store.get(session_id)
        with session.lock:
            subset = resolve_criteria_subset(session.table, criteria)
            return rankings_payload(session, resolve_rules(rules), subset)

    @app.patch("/sessions/{session_id}/cells")
    def edit_cell(session_id: str, body: CellEdit):
        session = store.get(session_id)
        with session.lock:
            table = session.table
            try:
                j = table.criterion_index(body.criterion_id)
                table.alternative_index(body.alternative_id)
            except (KeyError, UnknownCriterionError) as exc:
                raise ServiceRefusal(422, "unknown_coordinate", str(exc)) from exc
            crit = table.criteria[j]
            if not (crit.scale_min <= body.value <= crit.scale_max):
                raise ServiceRefusal(
                    422, "out_of_scale",
                    f"value {body.value} outside [{crit.scale_min}, {crit.scale_max}] "
                    f"for criterion {crit.id}",
                    locus=f"({body.alternative_id}, {body.criterion_id})")
            before = rankings_payload(session)
            record = EditRecord(
                seq=len(session.edit_log) + 1, kind="cell", actor=body.actor,
                timestamp=datetime.now(timezone.utc).isoformat(),
                payload={"alternative_id": body.alternative_id,
                         "criterion_id": body.criterion_id, "value": body.value})
            session.table, session.weights = apply_edit(session.table, session.weights, record)
            session.edit_log.append(record)
            after = rankings_payload(session)
            return {**after, "deltas": rank_deltas(before, after)}

    @app.put("/sessions/{session_id}/weights")
    def edit_weights(session_id: str, body: WeightsEdit):
        session = store.get(session_id)
        with session.lock:
            unknown = [cid for cid in body.weights if cid not in session.table.criterion_ids]
            if unknown:
                raise ServiceRefusal(422, "unknown_criterion",
                                     f"unknown criterion ids: {unknown}")
            merged = {**session.weights, **{k: float(v) for k, v in body.weights.items()}}
            if any(v < 0 for v in merged.values()) or not any(v > 0 for v in merged.values()):
                raise ServiceRefusal(422, "invalid_weights",
                                     "weights must be >= 0 with at least one > 0")
            before = rankings_payload(session)
            record = EditRecord(
                seq=len(session.edit_log) + 1, kind="weights", actor=body.actor,
                timestamp=datetime.now(timezone.utc).isoformat(),
                payload={"weights": {k: float(v) for k, v in body.weights.items()}})
            session.table, session.weights = apply_edit(session.table, session.weights, record)
            session.edit_log.append(record)
            after = rankings_payload(session)
            return {**after, "deltas": rank_deltas(before, after)}

    @app.post("/sessions/{session_id}/compare")
    def compare(session_id: str, body: CompareBody):
        session = store.get(session_id)
        with session.lock:
            if body.rule == "aggregate":
                payload = rankings_payload(session)
                ours = payload["order"]["aggregate"]
            else:
                rules = resolve_rules(body.rule)
                payload = rankings_payload(session, rules)
                ours = payload["order"][rules[0]]
        comparison = compare_rankings(ours, body.ranking)
        return {
            "common_ids": list(comparison.common_ids),
            "kendall_tau": comparison.kendall_tau,
            "spearman_rho": comparison.spearman_rho,
            "top_k_overlap": {str(k): v for k, v in comparison.top_k_overlap.items()},
            "positions_a": {str(k): v for k, v in comparison.positions_a.items()},
            "positions_b": {str(k): v for k, v in comparison.positions_b.items()},
            "deltas": {str(k): v for k, v in comparison.deltas.items()},
        }

    @app.get("/sessions/{session_id}/export")
    def export_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            table = session.table
            criteria_ids = list(table.criterion_ids)
            etable = run_all_rules(table, session.weight_vector(criteria_ids),
                                   session.params)
            agg = aggregate_table(etable)
            files: dict[str, str] = {}
            files["table.csv"] = _render(storage.save_acs_csv, table,
                                         with_criteria_sidecar=False)
            files["table.criteria.json"] = json.dumps(
                {"criteria": [{
                    "id": c.id, "name": c.name, "description": c.description,
                    "prompt_text": c.prompt_text, "direction": c.direction,
                    "scale_min": c.scale_min, "scale_max": c.scale_max,
                } for c in table.criteria]}, indent=2) + "\n"
            files["etable.csv"] = _render(storage.save_etable, etable)
            files["atable.csv"] = _render(storage.save_atable, agg)
            files["edit_log.json"] = json.dumps(
                [r.to_dict() for r in session.edit_log], indent=2) + "\n"
            return {"session_id": session.id, "files": files,
                    "params": session.params.as_dict(),
                    "weights": dict(session.weights)}

    return app


def _render(save_fn, value, **kwargs) -> str:
    """Run a file-writing helper against a temp path and return the text."""
    import tempfile
    with tempfile.TemporaryDirectory() as tmp:
        target = f"{tmp}/out"
        save_fn(target, value, **kwargs)
        with open(target, encoding="utf-8") as handle:
            return handle.read()


app = create_app()
