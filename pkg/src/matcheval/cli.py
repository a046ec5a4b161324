"""Command-line interface: imports, evaluations, KPI reports, the REST
service and the benchmark harness.

The data directory comes from ``--data-dir`` or the MATCHEVAL_DATA_DIR
environment variable.  Evaluation output is JSON by default; tabular
commands offer ``--csv``.
"""

from __future__ import annotations

import csv as csv_module
import io
import json
import sys
from typing import Optional

import click

from . import exploration, metrics, softkpi
from .bench import run_bench
from .clustering import closure_deficiency, confusion_matrix_sweep
from .errors import MatchevalError
from .exploration import SetExpression, SourceRef
from .model import ImportFormat, ImportSpec
from .service import (
    ApiConfig,
    confusion_json,
    expression_json,
    metric_json,
    pair_view_json,
)
from .store import Store, experiment_kpis_to_json, solution_kpis_to_json


def emit(payload) -> None:
    click.echo(json.dumps(payload, indent=2))


def emit_csv(rows: list[dict]) -> None:
    if not rows:
        return
    out = io.StringIO()
    writer = csv_module.DictWriter(out, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    click.echo(out.getvalue().rstrip("\n"))


class Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except MatchevalError as exc:
            raise click.ClickException(f"{exc.code}: {exc}") from exc
        except ValueError as exc:
            raise click.ClickException(str(exc)) from exc


@click.group(cls=Cli)
@click.option("--data-dir", envvar="MATCHEVAL_DATA_DIR",
              default="./matcheval-data", show_default=True,
              help="Directory holding the embedded store.")
@click.pass_context
def main(ctx, data_dir):
    """Evaluate and explore entity-resolution results."""
    ctx.obj = data_dir


def get_store(ctx) -> Store:
    return Store(ctx.obj)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8642, show_default=True)
@click.option("--cors/--no-cors", default=False,
              help="Allow cross-origin requests (shared deployments).")
@click.option("--static-dir", default=None,
              help="Serve a built explorer UI from this directory under /app.")
@click.pass_context
def serve(ctx, host, port, cors, static_dir):
    """Start the REST service."""
    from .service import run
    run(ApiConfig(data_dir=ctx.obj, host=host, port=port, cors=cors,
                  static_dir=static_dir))


# --- imports --------------------------------------------------------------------

@main.group("import")
def import_group():
    """Import datasets, gold standards and experiments from CSV."""


def csv_options(fn):
    fn = click.option("--separator", default=",", show_default=True)(fn)
    fn = click.option("--quote", default='"', show_default=True)(fn)
    fn = click.option("--escape", default=None)(fn)
    return fn


@import_group.command("dataset")
@click.argument("file", type=click.File("r"))
@click.option("--name", required=True)
@click.option("--id-column", default="id", show_default=True)
@csv_options
@click.pass_context
def import_dataset(ctx, file, name, id_column, separator, quote, escape):
    spec = ImportSpec(ImportFormat.DATASET_CSV, separator=separator,
                      quote=quote, escape=escape, id_column=id_column)
    dataset = get_store(ctx).import_dataset(file.read(), spec, name=name)
    emit({"id": dataset.id, "name": dataset.name,
          "recordCount": dataset.record_count,
          "attributeNames": dataset.attribute_names})


@import_group.command("gold")
@click.argument("file", type=click.File("r"))
@click.option("--dataset-id", required=True)
@click.option("--name", default="")
@click.option("--format", "format_", type=click.Choice(["pairs", "clusterColumn"]),
              default="pairs", show_default=True)
@click.option("--id-column-a", default="p1", show_default=True)
@click.option("--id-column-b", default="p2", show_default=True)
@click.option("--id-column", default="id", show_default=True)
@click.option("--cluster-column", default="cluster", show_default=True)
@csv_options
@click.pass_context
def import_gold(ctx, file, dataset_id, name, format_, id_column_a, id_column_b,
                id_column, cluster_column, separator, quote, escape):
    if format_ == "pairs":
        spec = ImportSpec(ImportFormat.GOLD_PAIRS_CSV, separator=separator,
                          quote=quote, escape=escape,
                          id_column_a=id_column_a, id_column_b=id_column_b)
    else:
        spec = ImportSpec(ImportFormat.GOLD_CLUSTER_COLUMN_CSV,
                          separator=separator, quote=quote, escape=escape,
                          id_column=id_column, cluster_column=cluster_column)
    gold = get_store(ctx).import_gold_standard(file.read(), spec, dataset_id,
                                               name=name)
    emit({"id": gold.id, "datasetId": gold.dataset_id,
          "clusterCount": gold.clustering.cluster_count(),
          "pairCount": gold.clustering.total_pair_count})


@import_group.command("kpis")
@click.argument("file", type=click.File("r"))
@click.option("--kind", type=click.Choice(["solutions", "experiments"]),
              default="solutions", show_default=True)
@click.option("--separator", default=",", show_default=True)
@click.pass_context
def import_kpis(ctx, file, kind, separator):
    """Apply a KPI sheet (one row per solution or experiment)."""
    store = get_store(ctx)
    if kind == "solutions":
        applied = store.import_solution_kpi_sheet(file.read(), separator)
    else:
        applied = store.import_experiment_kpi_sheet(file.read(), separator)
    emit({"applied": [entity.name for entity in applied]})


@import_group.command("experiment")
@click.argument("file", type=click.File("r"))
@click.option("--dataset-id", required=True)
@click.option("--name", required=True)
@click.option("--solution-id", default=None)
@click.option("--id-column-a", default="p1", show_default=True)
@click.option("--id-column-b", default="p2", show_default=True)
@click.option("--similarity-column", default=None)
@csv_options
@click.pass_context
def import_experiment(ctx, file, dataset_id, name, solution_id, id_column_a,
                      id_column_b, similarity_column, separator, quote, escape):
    spec = ImportSpec(ImportFormat.EXPERIMENT_CSV, separator=separator,
                      quote=quote, escape=escape, id_column_a=id_column_a,
                      id_column_b=id_column_b,
                      similarity_column=similarity_column)
    experiment = get_store(ctx).import_experiment(
        file.read(), spec, dataset_id, name=name, solution_id=solution_id)
    emit({"id": experiment.id, "name": experiment.name,
          "datasetId": experiment.dataset_id,
          "matchCount": len(experiment.matches)})


# --- listing and deletion ---------------------------------------------------------

@main.command("list")
@click.argument("kind", type=click.Choice(
    ["datasets", "goldstandards", "experiments", "solutions"]))
@click.pass_context
def list_entities(ctx, kind):
    """List stored entities of one kind."""
    store = get_store(ctx)
    if kind == "datasets":
        emit([{"id": d.id, "name": d.name, "recordCount": d.record_count}
              for d in store.list_datasets()])
    elif kind == "goldstandards":
        emit([{"id": g.id, "name": g.name, "datasetId": g.dataset_id}
              for g in store.list_gold_standards()])
    elif kind == "experiments":
        emit([{"id": e.id, "name": e.name, "datasetId": e.dataset_id,
               "matchCount": len(e.matches)} for e in store.list_experiments()])
    else:
        emit([{"id": s.id, "name": s.name,
               "kpis": solution_kpis_to_json(s.soft_kpis)}
              for s in store.list_solutions()])


@main.command("delete")
@click.argument("kind", type=click.Choice(
    ["dataset", "goldstandard", "experiment", "solution"]))
@click.argument("entity_id")
@click.pass_context
def delete_entity(ctx, kind, entity_id):
    """Delete one entity (datasets cascade to dependents)."""
    store = get_store(ctx)
    {"dataset": store.delete_dataset,
     "goldstandard": store.delete_gold_standard,
     "experiment": store.delete_experiment,
     "solution": store.delete_solution}[kind](entity_id)
    emit({"deleted": entity_id})


# --- evaluation -------------------------------------------------------------------

@main.group()
def evaluate():
    """Run evaluations against stored entities."""


def load_eval_pair(ctx, experiment_id, gold_id):
    store = get_store(ctx)
    experiment = store.get_experiment(experiment_id)
    gold = store.get_gold_standard(gold_id)
    dataset = store.get_dataset(experiment.dataset_id)
    return store, dataset, experiment, gold


@evaluate.command("metrics")
@click.option("--experiment-id", required=True)
@click.option("--gold-id", required=True)
@click.option("--csv", "as_csv", is_flag=True)
@click.pass_context
def evaluate_metrics(ctx, experiment_id, gold_id, as_csv):
    _, dataset, experiment, gold = load_eval_pair(ctx, experiment_id, gold_id)
    matches = [(m.record_a, m.record_b, m.similarity)
               for m in experiment.matches]
    matrix = confusion_matrix_sweep(dataset.record_count, gold.clustering,
                                    matches, 2)[-1][0]
    pair_values = metrics.pair_metrics(matrix)
    exp_clustering = experiment.clustering(dataset.record_count)
    cluster_values = [
        metrics.closest_cluster_f1(exp_clustering, gold.clustering),
        metrics.variation_of_information(exp_clustering, gold.clustering),
        metrics.generalized_merge_distance(exp_clustering, gold.clustering),
    ]
    if as_csv:
        emit_csv([{"metric": m.name, "value": m.value}
                  for m in [*pair_values, *cluster_values]])
        return
    emit({"confusion": confusion_json(matrix),
          "pairMetrics": [metric_json(m) for m in pair_values],
          "clusterMetrics": [metric_json(m) for m in cluster_values],
          "closureDeficiency": closure_deficiency(
              dataset.record_count, [m.pair for m in experiment.matches])})


@evaluate.command("diagram")
@click.option("--experiment-id", required=True)
@click.option("--gold-id", required=True)
@click.option("-x", "--x-metric", default="recall", show_default=True)
@click.option("-y", "--y-metric", default="precision", show_default=True)
@click.option("-s", "--samples", default=10, show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
@click.pass_context
def evaluate_diagram(ctx, experiment_id, gold_id, x_metric, y_metric, samples,
                     as_csv):
    _, dataset, experiment, gold = load_eval_pair(ctx, experiment_id, gold_id)
    points = exploration.metric_metric_diagram(
        dataset, experiment, gold, x_metric, y_metric, samples)
    rows = [{"threshold": p.threshold, x_metric: p.x, y_metric: p.y,
             **confusion_json(p.matrix)} for p in points]
    emit_csv(rows) if as_csv else emit(rows)


@evaluate.command("venn")
@click.option("--dataset-id", required=True)
@click.option("--source", "sources", multiple=True, required=True,
              help="experiment:<id> or gold:<id>; repeat for 2-4 sources.")
@click.option("--mode", default="closure", show_default=True)
@click.pass_context
def evaluate_venn(ctx, dataset_id, sources, mode):
    store = get_store(ctx)
    dataset = store.get_dataset(dataset_id)
    refs = [SourceRef.parse(s) for s in sources]
    experiments = {r.id: store.get_experiment(r.id)
                   for r in refs if r.kind == "experiment"}
    golds = {r.id: store.get_gold_standard(r.id)
             for r in refs if r.kind == "gold"}
    regions = exploration.venn_regions(dataset, refs, experiments, golds, mode)
    emit([{"members": [sources[i] for i in r.members], "count": r.count,
           "expression": expression_json(r.expression)} for r in regions])


@evaluate.command("set")
@click.option("--dataset-id", required=True)
@click.option("--include", "includes", multiple=True, required=True)
@click.option("--exclude", "excludes", multiple=True)
@click.option("--mode", default="closure", show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
@click.pass_context
def evaluate_set(ctx, dataset_id, includes, excludes, mode, as_csv):
    """Pairs in every included source and no excluded one."""
    store = get_store(ctx)
    dataset = store.get_dataset(dataset_id)
    expression = SetExpression(
        include=tuple(SourceRef.parse(s) for s in includes),
        exclude=tuple(SourceRef.parse(s) for s in excludes),
        pair_mode=mode)
    refs = [*expression.include, *expression.exclude]
    experiments = {r.id: store.get_experiment(r.id)
                   for r in refs if r.kind == "experiment"}
    golds = {r.id: store.get_gold_standard(r.id)
             for r in refs if r.kind == "gold"}
    views = exploration.evaluate_set_expression(dataset, expression,
                                                experiments, golds)
    if as_csv:
        emit_csv([{"recordA": v.native_ids[0], "recordB": v.native_ids[1],
                   "similarity": v.similarity,
                   "classification": v.classification} for v in views])
        return
    emit([pair_view_json(v) for v in views])


@evaluate.command("profile")
@click.option("--dataset-id", required=True)
@click.option("--gold-id", default=None)
@click.pass_context
def evaluate_profile(ctx, dataset_id, gold_id):
    store = get_store(ctx)
    dataset = store.get_dataset(dataset_id)
    gold = store.get_gold_standard(gold_id) if gold_id else None
    profile = metrics.profile_dataset(dataset, gold)
    emit({"name": profile.name, "sparsity": profile.sparsity,
          "textuality": profile.textuality, "tupleCount": profile.tuple_count,
          "positiveRatio": profile.positive_ratio,
          "vocabularySize": len(profile.vocabulary)})


# --- soft KPIs ----------------------------------------------------------------------

@main.group()
def kpi():
    """Decision matrix and KPI aggregation."""


def build_rows(ctx, gold_id, metric_names):
    store = get_store(ctx)
    solutions = store.list_solutions()
    gold = store.get_gold_standard(gold_id) if gold_id else None
    dataset = store.get_dataset(gold.dataset_id) if gold else None
    experiments = [e for e in store.list_experiments()
                   if dataset is None or e.dataset_id == dataset.id]
    return softkpi.decision_matrix(
        solutions, experiments, gold,
        record_count=dataset.record_count if dataset else 0,
        metric_names=list(metric_names))


@kpi.command("matrix")
@click.option("--gold-id", default=None)
@click.option("--metric", "metric_names", multiple=True,
              default=("precision", "recall", "f1"), show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
@click.pass_context
def kpi_matrix(ctx, gold_id, metric_names, as_csv):
    rows = build_rows(ctx, gold_id, metric_names)
    payload = [{
        "solutionId": r.solution_id, "solutionName": r.solution_name,
        "generalCosts": r.general_costs, "effortCosts": r.effort_costs,
        "deploymentType": r.deployment_type, "interfaces": r.interfaces,
        "techniques": r.techniques, "bestExperimentId": r.best_experiment_id,
        "metrics": r.metrics} for r in rows]
    if as_csv:
        emit_csv([{"solution": r.solution_name,
                   "generalCosts": r.general_costs,
                   **{f"metric_{k}": v for k, v in r.metrics.items()}}
                  for r in rows])
        return
    emit(payload)


@kpi.command("aggregate")
@click.option("--gold-id", default=None)
@click.option("--term", "terms", multiple=True, required=True,
              help="source=weight, e.g. generalCosts=-1 or metric:f1=2")
@click.pass_context
def kpi_aggregate(ctx, gold_id, terms):
    parsed = []
    for term in terms:
        source, _, weight = term.rpartition("=")
        parsed.append(softkpi.AggregationTerm(source, float(weight)))
    rows = build_rows(ctx, gold_id, ("precision", "recall", "f1"))
    scores = softkpi.aggregate_scores(
        softkpi.AggregationSpec(terms=tuple(parsed)), rows)
    emit(sorted(({"solutionId": r.solution_id, "solutionName": r.solution_name,
                  "score": scores[r.solution_id]} for r in rows),
                key=lambda row: -row["score"]))


# --- benchmark harness -----------------------------------------------------------------

@main.command()
@click.option("--records", default=10000, show_default=True)
@click.option("--matches", default=5000, show_default=True)
@click.option("--samples", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--algorithm", "algorithms", multiple=True,
              type=click.Choice(["optimized", "naive"]),
              default=("optimized", "naive"), show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
def bench(records, matches, samples, seed, algorithms, as_csv):
    """Time the optimized sweep against the naive recomputation."""
    results = run_bench(records, matches, samples, seed=seed,
                        algorithms=tuple(algorithms))
    rows = [{"algorithm": r.algorithm, "records": r.records,
             "matches": r.matches, "samples": r.samples,
             "seconds": round(r.seconds, 4)} for r in results]
    emit_csv(rows) if as_csv else emit(rows)


if __name__ == "__main__":  # pragma: no cover
    main()
