"""Regenerate the bundled mock-provider demo fixtures.

Produces a deterministic 13-policy x 11-criterion scripted run:
``demo_mock_script.json`` (the provider script) and ``llm_demo.csv`` /
``llm_demo.criteria.json`` (the table it scores to). Response texts cycle
through the verdict phrasings the rating grammar accepts, so the demo
also exercises the parser end to end.
"""

from pathlib import Path
import json

import numpy as np

from policyrank import storage
from policyrank.scoring import (ScriptedProvider, TranscriptArchive,
                                build_script, score_table)

DATA = Path(__file__).resolve().parents[1] / "src" / "policyrank" / "data"
DEMO_POLICY_IDS = [2, 3, 4, 5, 6, 7, 9, 13, 14, 17, 20, 21, 22]

PHRASINGS = (
    "Considering the factors above, this policy earns a solid verdict.\n\nRating: {k}/10",
    "Weighing strengths against limitations, I would put it at {k} out of 10.",
    "All told, the policy could be rated at {lo} to {hi}.",
    "On balance this policy is rated {k}.",
)


def response_for(rng, index):
    k = int(rng.integers(2, 10))
    phrasing = PHRASINGS[index % len(PHRASINGS)]
    if "{lo}" in phrasing:
        return phrasing.format(lo=k - 1, hi=k)  # midpoint k - 0.5
    return phrasing.format(k=k)


def main():
    catalog = storage.load_catalog(storage.fixture_path("catalog_policies"),
                                   storage.fixture_path("catalog_criteria"))
    alts = [catalog.alternative(i) for i in DEMO_POLICY_IDS]
    crits = list(catalog.criteria)
    rng = np.random.default_rng(172801)
    responses = {}
    for idx, alt in enumerate(alts):
        for jdx, crit in enumerate(crits):
            responses[(alt.id, crit.id)] = [response_for(rng, idx * len(crits) + jdx)]
    script = build_script(responses, alts, crits)
    (DATA / "demo_mock_script.json").write_text(
        json.dumps(script, indent=2) + "\n", encoding="utf-8")

    provider = ScriptedProvider.from_file(DATA / "demo_mock_script.json")
    run = score_table(provider, storage.load_template(storage.fixture_path("query_template")),
                      alts, crits, archive=TranscriptArchive())
    storage.save_acs_csv(DATA / "llm_demo.csv", run.table)
    print(f"wrote demo script and {run.table.m} x {run.table.n} table")


if __name__ == "__main__":
    main()
