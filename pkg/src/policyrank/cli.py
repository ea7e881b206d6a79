"""Command-line surface: score, rank, aggregate, compare, report, serve.

Human-readable summaries go to stdout; machine-readable artifacts go to
the paths given by --out/--outdir. Every file-producing command writes a
run manifest (inputs, parameters, output digests) next to its primary
output, so a run can be replayed and checked byte for byte.

Exit codes: 0 success, 1 validation, 2 I/O, 3 provider, 4 partial run.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from . import storage
from .aggregate import aggregate_table, compare_rankings
from .errors import (PartialRunError, PolicyRankError, ProviderError,
                     TableValidationError)
from .model import WeightVector
from .rules import RULE_ORDER, RuleParams, run_all_rules
from .scoring import (RetryPolicy, ScriptedProvider, TranscriptArchive,
                      score_table)
from .scoring.providers import (ENV_CONCURRENCY, ENV_RETRIES,
                                HttpChatProvider)
from .selection import resolve_criteria_subset, resolve_rules

EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_PROVIDER = 3
EXIT_PARTIAL = 4


@click.group()
@click.pass_context
def cli(ctx):
    """Multi-criteria policy ranking and deliberation engine."""
    ctx.ensure_object(dict)
    ctx.obj.setdefault("argv", list(sys.argv[1:]))


def _current_argv() -> list[str]:
    ctx = click.get_current_context(silent=True)
    if ctx is not None and ctx.obj and "argv" in ctx.obj:
        return list(ctx.obj["argv"])
    return list(sys.argv[1:])


def _load_table(table_path: str, criteria_file: str | None):
    return storage.load_acs_csv(table_path, criteria=criteria_file)


def _weights_for(spec: str, criterion_ids) -> WeightVector:
    if spec == "equal":
        return WeightVector.equal(len(criterion_ids))
    return storage.load_weights(spec, criterion_ids)


def _default_manifest_path(out: str) -> str:
    return f"{out}.manifest.json"


def _write_manifest(path: str, command: str, argv, params: dict,
                    inputs: dict[str, str], outputs: dict[str, str]) -> None:
    manifest = storage.RunManifest(
        command=command,
        argv=tuple(argv),
        params=params,
        inputs={label: storage.manifest_entry(p) for label, p in inputs.items()},
        outputs={label: storage.manifest_entry(p) for label, p in outputs.items()},
    )
    storage.save_manifest(path, manifest)


@cli.command()
@click.option("--table", "table_path", required=True, type=click.Path(), help="Performance table CSV.")
@click.option("--criteria-file", type=click.Path(), default=None,
              help="Criteria sidecar JSON (defaults to <table>.criteria.json).")
@click.option("--weights", default="equal", show_default=True,
              help="'equal' or a criterion_id,weight CSV file.")
@click.option("--criteria", default="all", show_default=True,
              help="Criterion subset: all, qol, ma, or a comma-separated id list.")
@click.option("--rules", default="all", show_default=True,
              help="Rules to run: all or a comma-separated subset of "
                   + ",".join(RULE_ORDER) + ".")
@click.option("--alpha", default=0.5, show_default=True, type=float,
              help="Optimism parameter for the best/worst-case blend rule.")
@click.option("--saw-norm", default="divide_by_max", show_default=True,
              type=click.Choice(["divide_by_max", "minmax"]))
@click.option("--topsis-norm", default="vector", show_default=True,
              type=click.Choice(["vector", "minmax"]))
@click.option("--out", type=click.Path(), default=None, help="Evaluation table CSV to write.")
@click.option("--manifest", type=click.Path(), default=None,
              help="Manifest path (defaults to <out>.manifest.json).")
def rank(table_path, criteria_file, weights, criteria, rules, alpha, saw_norm,
         topsis_norm, out, manifest):
    """Rank a performance table under the selected decision rules."""
    table = _load_table(table_path, criteria_file)
    subset = resolve_criteria_subset(table, criteria)
    from .model import subset_columns
    working = subset_columns(table, subset)
    weight_vector = _weights_for(weights, working.criterion_ids)
    params = RuleParams(hurwicz_alpha=alpha, saw_normalization=saw_norm,
                        topsis_normalization=topsis_norm)
    etable = run_all_rules(working, weight_vector, params, resolve_rules(rules))

    # artifacts land before any stdout prose so a truncated pipe can't lose them
    if out:
        storage.save_etable(out, etable)
        manifest_path = manifest or _default_manifest_path(out)
        inputs = {"table": table_path}
        if criteria_file:
            inputs["criteria"] = criteria_file
        if weights != "equal":
            inputs["weights"] = weights
        _write_manifest(
            manifest_path, "rank", _current_argv(),
            params={**params.as_dict(), "criteria": subset,
                    "rules": list(etable.rules), "weights": weights},
            inputs=inputs, outputs={"etable": out})

    for rule in etable.rules:
        order = etable.descending_order(rule)
        click.echo(f"{rule}: " + ", ".join(str(aid) for aid in order))
    if out:
        click.echo(f"wrote {out}")


@cli.command()
@click.option("--etable", "etable_path", required=True, type=click.Path(),
              help="Evaluation table CSV (per-rule rank columns).")
@click.option("--out", type=click.Path(), default=None, help="Aggregation table CSV to write.")
@click.option("--manifest", type=click.Path(), default=None)
def aggregate(etable_path, out, manifest):
    """Aggregate rank columns into Borda / median / averaged-rank-median."""
    etable = storage.load_etable(etable_path)
    result = aggregate_table(etable)
    if out:
        storage.save_atable(out, result)
        _write_manifest(manifest or _default_manifest_path(out), "aggregate",
                        _current_argv(), params={},
                        inputs={"etable": etable_path}, outputs={"atable": out})
    for aid, name, borda, median, arm in result.rows():
        click.echo(f"{aid:>3}  {borda:8.2f}  {median:6.2f}  {arm:6.2f}  {name}")
    if out:
        click.echo(f"wrote {out}")


@cli.command()
@click.option("--catalog", "catalogs", multiple=True, required=True, type=click.Path(),
              help="Catalog JSON file(s) with alternatives and/or criteria.")
@click.option("--template", "template_path", type=click.Path(), default=None,
              help="Query template JSON (defaults to the bundled template).")
@click.option("--provider", required=True,
              help="'mock:SCRIPT.json' for a scripted run or 'live' for the "
                   "environment-configured HTTP provider.")
@click.option("--alternatives", default="all", show_default=True,
              help="Comma-separated alternative ids to score, or 'all'.")
@click.option("--criteria", default="all", show_default=True,
              help="Comma-separated criterion ids to score, or 'all'.")
@click.option("--out", required=True, type=click.Path(), help="Performance table CSV to write.")
@click.option("--transcripts", type=click.Path(), default=None,
              help="Transcript archive JSONL (defaults to <out>.transcripts.jsonl).")
@click.option("--concurrency", type=int, default=None,
              help=f"Max in-flight provider calls (default 4, env {ENV_CONCURRENCY}).")
@click.option("--retries", type=int, default=None,
              help=f"Attempts per cell (default 3, env {ENV_RETRIES}).")
@click.option("--allow-partial", is_flag=True,
              help="Turn unparsed cells into a worklist instead of failing.")
@click.option("--manifest", type=click.Path(), default=None)
def score(catalogs, template_path, provider, alternatives, criteria, out,
          transcripts, concurrency, retries, allow_partial, manifest):
    """Score alternatives x criteria through an LLM provider."""
    catalog = storage.load_catalog(*catalogs)
    template = (storage.load_template(template_path) if template_path
                else storage.load_template(storage.fixture_path("query_template")))
    if alternatives == "all":
        alts = list(catalog.alternatives)
    else:
        wanted = [int(x) for x in alternatives.split(",") if x.strip()]
        alts = [catalog.alternative(i) for i in wanted]
    if criteria == "all":
        crits = list(catalog.criteria)
    else:
        crits = [catalog.criterion(c.strip()) for c in criteria.split(",") if c.strip()]

    if provider.startswith("mock:"):
        llm = ScriptedProvider.from_file(provider[len("mock:"):])
    elif provider == "live":
        llm = HttpChatProvider.from_env()
    else:
        raise click.UsageError("--provider must be 'mock:SCRIPT' or 'live'")

    concurrency = concurrency or int(os.environ.get(ENV_CONCURRENCY, "4"))
    retries = retries or int(os.environ.get(ENV_RETRIES, "3"))
    archive_path = transcripts or f"{out}.transcripts.jsonl"
    run = score_table(
        llm, template, alts, crits,
        concurrency_limit=concurrency,
        retry=RetryPolicy(max_attempts=retries),
        archive=TranscriptArchive(archive_path),
        allow_partial=allow_partial,
    )
    if run.table is None:
        worklist_path = f"{out}.worklist.csv"
        with open(worklist_path, "w", encoding="utf-8") as handle:
            handle.write("alternative_id,criterion_id\n")
            for alt_id, crit_id in run.worklist:
                handle.write(f"{alt_id},{crit_id}\n")
        click.echo(f"{len(run.worklist)} cell(s) need human entry; worklist at {worklist_path}")
        click.echo(f"transcripts at {archive_path}")
        return
    storage.save_acs_csv(out, run.table)
    manifest_path = manifest or _default_manifest_path(out)
    provider_label = provider if provider.startswith("mock:") else "live"
    inputs = {f"catalog_{i}": path for i, path in enumerate(catalogs)}
    if template_path:
        inputs["template"] = template_path
    if provider.startswith("mock:"):
        inputs["script"] = provider[len("mock:"):]
    _write_manifest(
        manifest_path, "score", _current_argv(),
        params={"provider": provider_label, "model": llm.model,
                "alternatives": [a.id for a in alts],
                "criteria": [c.id for c in crits],
                "concurrency": concurrency, "retries": retries},
        inputs=inputs,
        outputs={"table": out, "criteria": str(Path(out).with_suffix(".criteria.json")),
                 "transcripts": archive_path})
    click.echo(f"scored {run.table.m} x {run.table.n} cells "
               f"({len(run.transcripts)} transcripts); wrote {out}")


@cli.command()
@click.option("--ranking-a", required=True, type=click.Path(), help="First ordering CSV.")
@click.option("--ranking-b", required=True, type=click.Path(), help="Second ordering CSV.")
def compare(ranking_a, ranking_b):
    """Compare two best-first orderings on their common alternatives."""
    first = storage.load_ranking(ranking_a)
    second = storage.load_ranking(ranking_b)
    result = compare_rankings(first, second)
    n = len(result.common_ids)
    click.echo(f"common alternatives: {n}")
    click.echo(f"kendall tau: {result.kendall_tau:.4f}")
    click.echo(f"spearman rho: {result.spearman_rho:.4f}")
    click.echo("top-k overlap:")
    for k in sorted(result.top_k_overlap):
        click.echo(f"  k={k:<3} {result.top_k_overlap[k]}/{k}")
    click.echo("position deltas (negative = moved up in B):")
    for aid in result.common_ids:
        delta = result.deltas[aid]
        click.echo(f"  {aid:>3}  A#{result.positions_a[aid]:<3} B#{result.positions_b[aid]:<3} {delta:+d}")


@cli.command()
@click.option("--table", "table_path", required=True, type=click.Path())
@click.option("--criteria-file", type=click.Path(), default=None)
@click.option("--weights", default="equal", show_default=True)
@click.option("--criteria", default="all", show_default=True)
@click.option("--rules", default="all", show_default=True)
@click.option("--alpha", default=0.5, show_default=True, type=float)
@click.option("--outdir", required=True, type=click.Path(), help="Directory for tables and figures.")
def report(table_path, criteria_file, weights, criteria, rules, alpha, outdir):
    """Write the evaluation/aggregation tables plus rendered figures."""
    from .model import subset_columns
    from .report import write_report
    table = _load_table(table_path, criteria_file)
    subset = resolve_criteria_subset(table, criteria)
    working = subset_columns(table, subset)
    weight_vector = _weights_for(weights, working.criterion_ids)
    params = RuleParams(hurwicz_alpha=alpha)
    artifacts = write_report(working, outdir, weight_vector, params, resolve_rules(rules))
    delimited = {k: str(v) for k, v in artifacts.items() if str(v).endswith(".csv")}
    inputs = {"table": table_path}
    if criteria_file:
        inputs["criteria"] = criteria_file
    _write_manifest(str(Path(outdir) / "report.manifest.json"), "report",
                    _current_argv(),
                    params={**params.as_dict(), "criteria": subset, "weights": weights},
                    inputs=inputs, outputs=delimited)
    for label, path in artifacts.items():
        click.echo(f"{label}: {path}")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Also serve a built workbench directory at /ui.")
def serve(host, port, ui_dir):
    """Run the deliberation HTTP service."""
    import uvicorn

    from .service import app
    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    argv = list(argv) if argv is not None else list(sys.argv[1:])
    try:
        cli.main(args=argv, standalone_mode=False, obj={"argv": argv})
        return 0
    except click.ClickException as exc:
        exc.show()
        return EXIT_VALIDATION
    except click.Abort:
        return EXIT_VALIDATION
    except TableValidationError as exc:
        for violation in exc.violations or []:
            click.echo(f"error: {violation.locus()}: {violation.message}", err=True)
        if not exc.violations:
            click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION
    except PartialRunError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_PARTIAL
    except ProviderError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_PROVIDER
    except BrokenPipeError:
        return 0  # downstream pipe closed early; artifacts are already on disk
    except (FileNotFoundError, PermissionError, IsADirectoryError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_IO
    except (PolicyRankError, ValueError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
