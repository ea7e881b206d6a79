"""File formats: performance tables, catalogs, rank tables, manifests.

Delimited text (comma) is the primary format for grids; nested key/value
JSON covers catalogs, templates, and run manifests. Canonical output is
byte-deterministic: identical inputs always serialize to identical
bytes, which is what makes manifest replay checkable by digest.

Worked examples for every format live in docs/formats.md.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .aggregate import AggregationResult
from .errors import FormatError
from .model import AcsTable, Alternative, Criterion, WeightVector, validate_table
from .rules import EvaluationTable
from .scoring.template import PromptTemplate

TOOL_NAME = "policyrank"
TOOL_VERSION = "0.1.0"

AGGREGATE_COLUMNS = ("borda", "simple_median", "averaged_rank_median")


# ---------------------------------------------------------------------------
# criteria sidecars and catalogs
# ---------------------------------------------------------------------------

def _criterion_from_dict(data: Mapping[str, object]) -> Criterion:
    try:
        return Criterion(
            id=str(data["id"]),
            name=str(data.get("name", data["id"])),
            description=str(data.get("description", "")),
            prompt_text=str(data.get("prompt_text", "")),
            direction=str(data.get("direction", "benefit")),
            scale_min=float(data["scale_min"]),
            scale_max=float(data["scale_max"]),
        )
    except KeyError as exc:
        raise FormatError(f"criterion entry missing field {exc}") from exc


def _criterion_to_dict(crit: Criterion) -> dict:
    return {
        "id": crit.id,
        "name": crit.name,
        "description": crit.description,
        "prompt_text": crit.prompt_text,
        "direction": crit.direction,
        "scale_min": crit.scale_min,
        "scale_max": crit.scale_max,
    }


def load_criteria(path: str | Path) -> tuple[Criterion, ...]:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    entries = data["criteria"] if isinstance(data, dict) else data
    criteria = tuple(_criterion_from_dict(e) for e in entries)
    seen = set()
    for crit in criteria:
        if crit.id in seen:
            raise FormatError(f"duplicate criterion id {crit.id!r}", locus=str(path))
        seen.add(crit.id)
    return criteria


def save_criteria(path: str | Path, criteria: Sequence[Criterion]) -> None:
    payload = {"criteria": [_criterion_to_dict(c) for c in criteria]}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class Catalog:
    """Seed data: the alternatives and criteria available for scoring."""

    alternatives: tuple[Alternative, ...] = ()
    criteria: tuple[Criterion, ...] = ()

    def alternative(self, alternative_id: int) -> Alternative:
        for alt in self.alternatives:
            if alt.id == alternative_id:
                return alt
        raise KeyError(f"unknown alternative id {alternative_id}")

    def criterion(self, criterion_id: str) -> Criterion:
        for crit in self.criteria:
            if crit.id == criterion_id:
                return crit
        raise KeyError(f"unknown criterion id {criterion_id!r}")


def load_catalog(*paths: str | Path) -> Catalog:
    """Read one or more catalog files and merge their sections.

    Each file is JSON with an ``alternatives`` and/or ``criteria`` list.
    Duplicate ids across files are a load failure; alternatives that will
    be scored by a model must carry prompt prose.
    """
    alternatives: list[Alternative] = []
    criteria: list[Criterion] = []
    for path in paths:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        for entry in data.get("alternatives", []):
            alternatives.append(Alternative(
                id=int(entry["id"]),
                name=str(entry["name"]),
                description=str(entry.get("description", "")),
            ))
        for entry in data.get("criteria", []):
            criteria.append(_criterion_from_dict(entry))
    seen_a: set[int] = set()
    for alt in alternatives:
        if alt.id in seen_a:
            raise FormatError(f"duplicate alternative id {alt.id} in catalog")
        seen_a.add(alt.id)
    seen_c: set[str] = set()
    for crit in criteria:
        if crit.id in seen_c:
            raise FormatError(f"duplicate criterion id {crit.id!r} in catalog")
        seen_c.add(crit.id)
    return Catalog(tuple(alternatives), tuple(criteria))


# ---------------------------------------------------------------------------
# performance tables (ACS)
# ---------------------------------------------------------------------------

def _default_criteria_path(path: Path) -> Path:
    return path.with_suffix(".criteria.json")


def load_acs_csv(path: str | Path, criteria: Sequence[Criterion] | str | Path | None = None,
                 provenance: str = "file") -> AcsTable:
    """Load a performance table; the sidecar criteria file supplies scales.

    The header row is ``id,name,<criterion ids...>``. Every cell must be
    numeric and inside its criterion's scale; a missing or extra cell is
    a load failure with its row/column coordinates, never an imputation.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no table file at {path}")
    if criteria is None:
        sidecar = _default_criteria_path(path)
        if not sidecar.exists():
            raise FileNotFoundError(f"no criteria sidecar found at {sidecar}")
        criteria = load_criteria(sidecar)
    elif isinstance(criteria, (str, Path)):
        criteria = load_criteria(criteria)
    criteria = tuple(criteria)
    by_id = {c.id: c for c in criteria}

    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError("empty table file", locus=str(path)) from None
        if len(header) < 3 or header[0] != "id" or header[1] != "name":
            raise FormatError(
                "table header must be 'id,name,<criterion ids...>'", locus=str(path))
        crit_ids = header[2:]
        unknown = [cid for cid in crit_ids if cid not in by_id]
        if unknown:
            raise FormatError(f"criteria not in sidecar: {unknown}", locus=str(path))
        table_criteria = tuple(by_id[cid] for cid in crit_ids)

        alternatives: list[Alternative] = []
        rows: list[list[float]] = []
        seen_ids: set[int] = set()
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(
                    f"expected {len(header)} cells, found {len(row)}",
                    locus=f"{path} row {line_no}")
            try:
                alt_id = int(row[0])
            except ValueError:
                raise FormatError(f"non-integer id {row[0]!r}",
                                  locus=f"{path} row {line_no}") from None
            if alt_id in seen_ids:
                raise FormatError(f"duplicate alternative id {alt_id}",
                                  locus=f"{path} row {line_no}")
            seen_ids.add(alt_id)
            values = []
            for cid, cell in zip(crit_ids, row[2:]):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise FormatError(
                        f"non-numeric score {cell!r}",
                        locus=f"{path} row {line_no}, column {cid}") from None
            alternatives.append(Alternative(id=alt_id, name=row[1]))
            rows.append(values)

    if not rows:
        raise FormatError("table has no data rows (m >= 1 required)", locus=str(path))
    prov = np.full((len(rows), len(table_criteria)), provenance, dtype=object)
    table = AcsTable(tuple(alternatives), table_criteria, np.array(rows), prov)
    validate_table(table).raise_if_invalid()
    return table


def _fmt_score(value: float) -> str:
    # repr of a float is the shortest string that round-trips exactly
    if value == int(value):
        return str(float(value))
    return repr(float(value))


def save_acs_csv(path: str | Path, table: AcsTable,
                 with_criteria_sidecar: bool = True) -> None:
    path = Path(path)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "name", *table.criterion_ids])
    for i, alt in enumerate(table.alternatives):
        writer.writerow([alt.id, alt.name, *(_fmt_score(v) for v in table.scores[i])])
    path.write_text(buf.getvalue(), encoding="utf-8")
    if with_criteria_sidecar:
        save_criteria(_default_criteria_path(path), table.criteria)


# ---------------------------------------------------------------------------
# evaluation (E) and aggregation (A) tables
# ---------------------------------------------------------------------------

def save_etable(path: str | Path, etable: EvaluationTable) -> None:
    """Write rank columns in canonical rule order, one decimal per value."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "name", *etable.rules])
    for i, alt_id in enumerate(etable.alternative_ids):
        writer.writerow([alt_id, etable.alternative_names[i],
                         *(f"{v:.1f}" for v in etable.columns[i])])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def load_etable(path: str | Path) -> EvaluationTable:
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError("empty evaluation table file", locus=str(path)) from None
        if len(header) < 3 or header[0] != "id" or header[1] != "name":
            raise FormatError("evaluation table header must be 'id,name,<rules...>'",
                              locus=str(path))
        rules = tuple(header[2:])
        ids: list[int] = []
        names: list[str] = []
        rows: list[list[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(f"expected {len(header)} cells, found {len(row)}",
                                  locus=f"{path} row {line_no}")
            try:
                ids.append(int(row[0]))
                names.append(row[1])
                rows.append([float(v) for v in row[2:]])
            except ValueError as exc:
                raise FormatError(f"bad value: {exc}", locus=f"{path} row {line_no}") from None
    if not rows:
        raise FormatError("evaluation table has no data rows", locus=str(path))
    if len(set(ids)) != len(ids):
        raise FormatError("duplicate alternative ids", locus=str(path))
    return EvaluationTable(tuple(ids), tuple(names), rules, np.array(rows))


def save_atable(path: str | Path, result: AggregationResult) -> None:
    """Write aggregate scores sorted descending by Borda, two decimals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "name", *AGGREGATE_COLUMNS])
    for aid, name, b, med, arm in result.rows():
        writer.writerow([aid, name, f"{b:.2f}", f"{med:.2f}", f"{arm:.2f}"])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def load_atable(path: str | Path) -> AggregationResult:
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["id", "name", *AGGREGATE_COLUMNS]:
            raise FormatError("aggregation table header mismatch", locus=str(path))
        ids, names, borda, med, arm = [], [], [], [], []
        for row in reader:
            if not row:
                continue
            ids.append(int(row[0]))
            names.append(row[1])
            borda.append(float(row[2]))
            med.append(float(row[3]))
            arm.append(float(row[4]))
    if not ids:
        raise FormatError("aggregation table has no data rows", locus=str(path))
    return AggregationResult(tuple(ids), tuple(names), tuple(borda), tuple(med), tuple(arm))


# ---------------------------------------------------------------------------
# orderings (rankings) and weights
# ---------------------------------------------------------------------------

def load_ranking(path: str | Path) -> list[int]:
    """Read a best-first id ordering from any CSV whose first column is ``id``.

    Aggregation tables qualify directly (they are sorted best-first).
    """
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or header[0] != "id":
            raise FormatError("ranking file must start with an 'id' column", locus=str(path))
        ids = []
        for row in reader:
            if row:
                ids.append(int(row[0]))
    if not ids:
        raise FormatError("ranking file has no data rows", locus=str(path))
    if len(set(ids)) != len(ids):
        raise FormatError("ranking contains duplicate ids", locus=str(path))
    return ids


def save_ranking(path: str | Path, ids: Sequence[int],
                 names: Mapping[int, str] | None = None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "name"])
    for aid in ids:
        writer.writerow([aid, (names or {}).get(aid, "")])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def load_weights(path: str | Path, criterion_ids: Sequence[str]) -> WeightVector:
    """Read ``criterion_id,weight`` rows and align them to a criterion order."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["criterion_id", "weight"]:
            raise FormatError("weights header must be 'criterion_id,weight'", locus=str(path))
        mapping: dict[str, float] = {}
        for row in reader:
            if not row:
                continue
            cid, value = row[0], float(row[1])
            if cid in mapping:
                raise FormatError(f"duplicate weight for criterion {cid!r}", locus=str(path))
            mapping[cid] = value
    missing = [cid for cid in criterion_ids if cid not in mapping]
    if missing:
        raise FormatError(f"weights file missing criteria: {missing}", locus=str(path))
    return WeightVector(tuple(mapping[cid] for cid in criterion_ids))


# ---------------------------------------------------------------------------
# prompt templates
# ---------------------------------------------------------------------------

def load_template(path: str | Path) -> PromptTemplate:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    return PromptTemplate(
        body=str(data["body"]),
        scale_min=float(data.get("scale_min", 1.0)),
        scale_max=float(data.get("scale_max", 10.0)),
    )


def save_template(path: str | Path, template: PromptTemplate) -> None:
    payload = {"body": template.body,
               "scale_min": template.scale_min, "scale_max": template.scale_max}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# run manifests
# ---------------------------------------------------------------------------

def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run: inputs, parameters, outputs.

    ``argv`` is the normalized command line; replaying it against the
    pinned inputs must regenerate the recorded output digests.
    """

    command: str
    argv: tuple[str, ...]
    params: Mapping[str, object]
    inputs: Mapping[str, Mapping[str, str]]   # label -> {path, sha256}
    outputs: Mapping[str, Mapping[str, str]]  # label -> {path, sha256}
    tool: str = TOOL_NAME
    version: str = TOOL_VERSION

    def to_dict(self) -> dict:
        return {
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "argv": list(self.argv),
            "params": dict(self.params),
            "inputs": {k: dict(v) for k, v in self.inputs.items()},
            "outputs": {k: dict(v) for k, v in self.outputs.items()},
        }


def manifest_entry(path: str | Path) -> dict[str, str]:
    return {"path": str(path), "sha256": file_digest(path)}


def save_manifest(path: str | Path, manifest: RunManifest) -> None:
    Path(path).write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def load_manifest(path: str | Path) -> RunManifest:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    return RunManifest(
        command=data["command"],
        argv=tuple(data.get("argv", ())),
        params=data.get("params", {}),
        inputs=data.get("inputs", {}),
        outputs=data.get("outputs", {}),
        tool=data.get("tool", TOOL_NAME),
        version=data.get("version", TOOL_VERSION),
    )


def verify_manifest_files(manifest: RunManifest, which: str = "outputs") -> list[str]:
    """Return digest mismatches ('' when a file is missing) for inputs/outputs."""
    problems = []
    for label, entry in getattr(manifest, which).items():
        target = Path(entry["path"])
        if not target.exists():
            problems.append(f"{which}[{label}]: missing file {target}")
        elif file_digest(target) != entry["sha256"]:
            problems.append(f"{which}[{label}]: digest mismatch for {target}")
    return problems


# ---------------------------------------------------------------------------
# bundled fixtures
# ---------------------------------------------------------------------------

FIXTURE_FILES = {
    "informed_assessment": "informed_assessment.csv",
    "informed_assessment_criteria": "informed_assessment.criteria.json",
    "e_table_informed": "e_table_informed.csv",
    "llm_demo": "llm_demo.csv",
    "llm_demo_criteria": "llm_demo.criteria.json",
    "catalog_policies": "catalog_policies.json",
    "catalog_criteria": "catalog_criteria.json",
    "query_template": "query_template.json",
    "demo_mock_script": "demo_mock_script.json",
    "ranking_gpt_topsis": "ranking_gpt_topsis.csv",
    "ranking_ia_overall": "ranking_ia_overall.csv",
    "ranking_ia_topsis": "ranking_ia_topsis.csv",
}


def fixture_path(name: str) -> Path:
    if name not in FIXTURE_FILES:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURE_FILES)}")
    return Path(resources.files("policyrank").joinpath("data", FIXTURE_FILES[name]))


def load_fixture_table(name: str) -> AcsTable:
    """Load one of the bundled performance tables by short name."""
    provenance = "informed_assessment" if name == "informed_assessment" else "file"
    if name == "llm_demo":
        provenance = "llm"
    return load_acs_csv(fixture_path(name), provenance=provenance)
