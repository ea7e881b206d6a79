"""Shared selection vocabulary for the CLI, service, and report paths.

Criterion subsets come in three named forms mirroring the standard
configurations (everything, quality-of-life only, mitigation/adaptation
only) plus explicit comma-separated id lists.
"""

from __future__ import annotations

from .errors import UnknownCriterionError
from .model import AcsTable
from .rules import RULE_ORDER


def resolve_criteria_subset(table: AcsTable, spec: str) -> list[str]:
    """Turn a subset keyword (all/qol/ma) or id list into criterion ids."""
    spec = (spec or "all").strip()
    if spec == "all":
        return list(table.criterion_ids)
    if spec == "qol":
        ids = [cid for cid in table.criterion_ids
               if cid.startswith("Q") and cid[1:].isdigit()]
        if not ids:
            raise UnknownCriterionError("qol (no Q* criteria in table)")
        return ids
    if spec == "ma":
        ids = ["mitigation", "adaptation"]
        missing = [cid for cid in ids if cid not in table.criterion_ids]
        if missing:
            raise UnknownCriterionError(",".join(missing))
        return ids
    return [cid.strip() for cid in spec.split(",") if cid.strip()]


def resolve_rules(spec: str) -> list[str]:
    """Turn 'all' or a comma-separated rule list into canonical rule ids."""
    spec = (spec or "all").strip()
    if spec == "all":
        return list(RULE_ORDER)
    rules = [r.strip() for r in spec.split(",") if r.strip()]
    unknown = [r for r in rules if r not in RULE_ORDER]
    if unknown:
        raise ValueError(f"unknown rule ids: {unknown}")
    return rules
