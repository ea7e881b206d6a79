"""Provider abstraction for obtaining free-text completions.

The wire contract is minimal: a request carries {model, prompt, decoding
parameters} and a response carries {text, metadata}. Transport specifics
stay behind the provider object, so the pipeline treats a scripted mock
and a live HTTP endpoint identically.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import requests


@dataclass(frozen=True)
class ProviderRequest:
    model: str
    prompt: str
    params: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class ProviderResponse:
    text: str
    metadata: Mapping[str, object] = field(default_factory=dict)


class ProviderTransportError(Exception):
    """A single call failed at the transport level; the pipeline may retry."""


class ProviderRateLimit(ProviderTransportError):
    """The provider asked us to slow down; retried with exponential backoff."""


class ScriptedProvider:
    """Deterministic mock provider driven by a script file.

    A script maps cells to response sequences. Each entry matches a
    prompt when all its ``match`` substrings occur in the prompt text;
    successive calls for the same entry consume successive items of its
    ``responses`` list (the last item repeats once exhausted). An item is
    either {"text": ...} or {"error": "transport" | "rate_limit"}.

    Responses carry fixed metadata, so scripted runs are byte-stable.
    """

    deterministic = True

    def __init__(self, script: Mapping[str, object]):
        self.model = str(script.get("model", "mock-scripted"))
        self._entries = []
        for entry in script.get("cells", []):
            match = tuple(entry["match"])
            responses = [self._normalize(item) for item in entry["responses"]]
            if not match or not responses:
                raise ValueError("script entries need non-empty 'match' and 'responses'")
            self._entries.append({"match": match, "responses": responses, "cursor": 0})
        default = script.get("default")
        self._default = (
            {"match": (), "responses": [self._normalize(i) for i in default], "cursor": 0}
            if default else None)
        self._lock = threading.Lock()
        self.calls = 0

    @staticmethod
    def _normalize(item) -> dict:
        return {"text": item} if isinstance(item, str) else dict(item)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedProvider":
        with open(path, encoding="utf-8") as handle:
            return cls(json.load(handle))

    def _entry_for(self, prompt: str):
        hits = [e for e in self._entries if all(s in prompt for s in e["match"])]
        if len(hits) > 1:
            raise ValueError(
                "mock script is ambiguous: multiple entries match one prompt "
                f"({[h['match'] for h in hits]})")
        if hits:
            return hits[0]
        if self._default is not None:
            return self._default
        raise ValueError("mock script has no entry matching prompt and no default")

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        with self._lock:
            self.calls += 1
            entry = self._entry_for(request.prompt)
            idx = min(entry["cursor"], len(entry["responses"]) - 1)
            entry["cursor"] += 1
            item = entry["responses"][idx]
        if "error" in item:
            if item["error"] == "rate_limit":
                raise ProviderRateLimit("scripted rate limit")
            raise ProviderTransportError(f"scripted transport failure: {item['error']}")
        return ProviderResponse(text=item["text"], metadata={"model": self.model, "scripted": True})


def build_script(responses: Mapping[tuple[object, str], Sequence[object]],
                 alternatives, criteria, model: str = "mock-scripted") -> dict:
    """Assemble a script dict from per-cell response sequences.

    ``responses`` maps (alternative_id, criterion_id) to a sequence of
    items; plain strings are wrapped as {"text": ...}. Match anchors use
    the phrases the default template renders around each name.
    """
    alts = {a.id: a for a in alternatives}
    crits = {c.id: c for c in criteria}
    cells = []
    for (alt_id, crit_id), seq in responses.items():
        items = [{"text": item} if isinstance(item, str) else dict(item) for item in seq]
        cells.append({
            "match": [f"policy of {alts[alt_id].name},", f"criterion: {crits[crit_id].name}."],
            "responses": items,
        })
    return {"model": model, "cells": cells}


# Environment configuration for the live provider.
ENV_ENDPOINT = "POLICYRANK_PROVIDER_ENDPOINT"
ENV_API_KEY = "POLICYRANK_PROVIDER_KEY"
ENV_MODEL = "POLICYRANK_PROVIDER_MODEL"
ENV_CONCURRENCY = "POLICYRANK_CONCURRENCY"
ENV_RETRIES = "POLICYRANK_RETRIES"


class HttpChatProvider:
    """Live provider speaking the common chat-completions HTTP dialect."""

    deterministic = False

    def __init__(self, endpoint: str, api_key: str, model: str, timeout: float = 120.0):
        self.endpoint = endpoint.rstrip("/")
        self.api_key = api_key
        self.model = model
        self.timeout = timeout

    @classmethod
    def from_env(cls) -> "HttpChatProvider":
        endpoint = os.environ.get(ENV_ENDPOINT)
        api_key = os.environ.get(ENV_API_KEY, "")
        model = os.environ.get(ENV_MODEL)
        if not endpoint or not model:
            raise ProviderTransportError(
                f"live provider needs {ENV_ENDPOINT} and {ENV_MODEL} set")
        return cls(endpoint, api_key, model)

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        payload = {
            "model": request.model,
            "messages": [{"role": "user", "content": request.prompt}],
            **dict(request.params),
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(f"{self.endpoint}/chat/completions",
                                 json=payload, headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise ProviderTransportError(str(exc)) from exc
        if resp.status_code == 429:
            raise ProviderRateLimit(f"rate limited: {resp.text[:200]}")
        if resp.status_code >= 400:
            raise ProviderTransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        body = resp.json()
        text = body["choices"][0]["message"]["content"]
        return ProviderResponse(text=text, metadata={
            "model": self.model,
            "usage": body.get("usage", {}),
        })
