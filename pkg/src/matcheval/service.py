"""HTTP service exposing the library; the only interface the browser
explorer talks to.

Every route delegates to one library operation.  Errors come back as a
structured body ``{code, message, detail}``: 404 for missing resources,
409 for duplicate imports, 400 for malformed input, 422 for semantically
impossible evaluations (e.g. missing similarity scores).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import exploration, metrics, softkpi
from .clustering import ConfusionMatrix, closure_deficiency, confusion_matrix_sweep
from .errors import (
    DuplicateEntity,
    DuplicateRecordId,
    MatchevalError,
    NotFound,
    RowArityError,
    SchemaError,
    SelfPairError,
    UnknownRecordId,
)
from .exploration import SetExpression, SourceRef
from .model import Dataset, Experiment, GoldStandard, ImportFormat, ImportSpec
from .store import (
    Store,
    experiment_kpis_from_json,
    experiment_kpis_to_json,
    solution_kpis_from_json,
    solution_kpis_to_json,
)

BAD_REQUEST = {SchemaError, RowArityError, DuplicateRecordId, UnknownRecordId,
               SelfPairError}


@dataclass
class ApiConfig:
    data_dir: str
    host: str = "127.0.0.1"
    port: int = 8642
    cors: bool = False
    page_size: int = 50
    static_dir: Optional[str] = None


def _status_for(error: Exception) -> int:
    if isinstance(error, NotFound):
        return 404
    if isinstance(error, DuplicateEntity):
        return 409
    if type(error) in BAD_REQUEST:
        return 400
    if isinstance(error, MatchevalError):
        return 422
    return 400


def _error_body(code: str, message: str, detail: Any = None) -> dict:
    return {"code": code, "message": message, "detail": detail}


# --- JSON shapes -----------------------------------------------------------------

def confusion_json(m: ConfusionMatrix) -> dict:
    return {"tp": m.tp, "fp": m.fp, "fn": m.fn, "tn": m.tn}


def metric_json(m: metrics.MetricValue) -> dict:
    return {"name": m.name, "value": m.value, "definedOn": list(m.defined_on),
            "readsTrueNegatives": m.reads_true_negatives}


def dataset_json(d: Dataset) -> dict:
    return {"id": d.id, "name": d.name, "attributeNames": d.attribute_names,
            "recordCount": d.record_count}


def gold_json(g: GoldStandard) -> dict:
    return {"id": g.id, "name": g.name, "datasetId": g.dataset_id,
            "clusterCount": g.clustering.cluster_count(),
            "pairCount": g.clustering.total_pair_count}


def experiment_json(e: Experiment) -> dict:
    return {"id": e.id, "name": e.name, "datasetId": e.dataset_id,
            "solutionId": e.solution_id,
            "matchCount": len(e.matches),
            "decisionThreshold": e.decision_threshold(),
            "softKpis": experiment_kpis_to_json(e.soft_kpis)}


def pair_view_json(v: exploration.PairView) -> dict:
    return {"pair": list(v.pair), "nativeIds": list(v.native_ids),
            "records": [list(r) for r in v.records],
            "similarity": v.similarity, "labels": v.labels,
            "classification": v.classification}


def expression_json(expr: SetExpression) -> dict:
    return {"include": [r.key for r in expr.include],
            "exclude": [r.key for r in expr.exclude],
            "pairMode": expr.pair_mode}


def paginate(items: Sequence, page: int, page_size: int, to_json) -> dict:
    total = len(items)
    pages = max(1, math.ceil(total / page_size)) if page_size else 1
    start = (page - 1) * page_size
    return {"total": total, "page": page, "pageSize": page_size,
            "pages": pages,
            "items": [to_json(i) for i in items[start:start + page_size]]}


# --- request bodies -----------------------------------------------------------------

class ExpressionBody(BaseModel):
    include: list[str]
    exclude: list[str] = Field(default_factory=list)
    pairMode: str = "closure"

    def to_expression(self) -> SetExpression:
        return SetExpression(
            include=tuple(SourceRef.parse(r) for r in self.include),
            exclude=tuple(SourceRef.parse(r) for r in self.exclude),
            pair_mode=self.pairMode)


class SetRequest(BaseModel):
    datasetId: str
    expression: ExpressionBody
    page: int = 1
    pageSize: Optional[int] = None
    sortKey: Optional[str] = None
    sortDescending: bool = True


class VennRequest(BaseModel):
    datasetId: str
    sources: list[str]
    pairMode: str = "closure"


class SelectRequest(BaseModel):
    datasetId: str
    experimentId: str
    goldId: Optional[str] = None
    strategy: str = "aroundThreshold"
    k: int = 10
    threshold: Optional[float] = None
    proportion: Optional[float] = None
    side: str = "both"
    partitions: int = 4
    perPartition: int = 5
    sampler: str = "random"
    seed: int = 0


class ExplainErrorRequest(BaseModel):
    datasetId: str
    experimentId: str
    goldId: str
    pair: list[int]
    q: float = 2.0
    threshold: Optional[float] = None
    candidateCap: int = 10000


class SolutionBody(BaseModel):
    name: str
    kpis: Optional[dict] = None


class KpiBody(BaseModel):
    kpis: Optional[dict] = None


class RankRequest(BaseModel):
    targetDatasetId: str
    candidateDatasetIds: list[str]
    weights: Optional[dict[str, float]] = None


class AggregationTermBody(BaseModel):
    source: str
    weight: float


class DecisionMatrixRequest(BaseModel):
    goldId: Optional[str] = None
    solutionIds: Optional[list[str]] = None
    metrics: list[str] = Field(default_factory=lambda: ["precision", "recall", "f1"])
    bestBy: str = "f1"
    ratePoints: Optional[list[list[float]]] = None


class AggregateRequest(DecisionMatrixRequest):
    terms: list[AggregationTermBody] = Field(default_factory=list)


# --- application -------------------------------------------------------------------

def create_app(config: ApiConfig) -> FastAPI:
    app = FastAPI(title="matcheval", version="0.1.0",
                  openapi_url="/openapi.json")
    store = Store(config.data_dir)
    app.state.store = store
    app.state.config = config
    cache: dict = {}

    if config.cors:
        app.add_middleware(CORSMiddleware, allow_origins=["*"],
                           allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(MatchevalError)
    async def domain_error(request: Request, exc: MatchevalError):
        return JSONResponse(status_code=_status_for(exc),
                            content=_error_body(exc.code, str(exc), exc.detail))

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content=_error_body("ValueError", str(exc)))

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content=_error_body("ValidationError",
                                                "invalid request",
                                                exc.errors()))

    def cached(key: tuple, compute):
        full_key = (store.mutation_count, *key)
        if full_key not in cache:
            if len(cache) > 512:
                cache.clear()
            cache[full_key] = compute()
        return cache[full_key]

    def sources_for(dataset: Dataset, refs: Sequence[SourceRef]):
        experiments = {}
        golds = {}
        for ref in refs:
            if ref.kind == "experiment" and ref.id not in experiments:
                experiments[ref.id] = store.get_experiment(ref.id)
            elif ref.kind == "gold" and ref.id not in golds:
                golds[ref.id] = store.get_gold_standard(ref.id)
        return experiments, golds

    def load_pair(dataset_id: str, experiment_id: str, gold_id: str):
        experiment = store.get_experiment(experiment_id)
        gold = store.get_gold_standard(gold_id)
        if experiment.dataset_id != gold.dataset_id:
            raise MatchevalError("experiment and gold standard cover "
                                 "different datasets")
        dataset = store.get_dataset(dataset_id or experiment.dataset_id)
        return dataset, experiment, gold

    def full_confusion(dataset, experiment, gold) -> ConfusionMatrix:
        matches = [(m.record_a, m.record_b, m.similarity)
                   for m in experiment.matches]
        return confusion_matrix_sweep(dataset.record_count, gold.clustering,
                                      matches, 2)[-1][0]

    # --- meta ------------------------------------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/openapi")
    def openapi_description():
        return app.openapi()

    # --- datasets ----------------------------------------------------------------

    @app.get("/datasets")
    def list_datasets():
        return [dataset_json(d) for d in store.list_datasets()]

    @app.post("/datasets", status_code=201)
    async def import_dataset(request: Request, name: str,
                             idColumn: str = "id", separator: str = ",",
                             quote: str = '"', escape: Optional[str] = None):
        body = (await request.body()).decode("utf-8")
        spec = ImportSpec(ImportFormat.DATASET_CSV, separator=separator,
                          quote=quote, escape=escape, id_column=idColumn)
        return dataset_json(store.import_dataset(body, spec, name=name))

    @app.get("/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        return dataset_json(store.get_dataset(dataset_id))

    @app.delete("/datasets/{dataset_id}", status_code=204)
    def delete_dataset(dataset_id: str):
        store.delete_dataset(dataset_id)

    @app.get("/datasets/{dataset_id}/records")
    def dataset_records(dataset_id: str, page: int = 1,
                        pageSize: Optional[int] = None):
        dataset = store.get_dataset(dataset_id)
        rows = list(zip(dataset.native_ids, dataset.records))
        return paginate(rows, page, pageSize or config.page_size,
                        lambda r: {"id": r[0], "values": r[1]})

    # --- gold standards --------------------------------------------------------------

    @app.get("/goldstandards")
    def list_golds():
        return [gold_json(g) for g in store.list_gold_standards()]

    @app.post("/goldstandards", status_code=201)
    async def import_gold(request: Request, datasetId: str, name: str = "",
                          format: str = "pairs",
                          idColumnA: str = "p1", idColumnB: str = "p2",
                          idColumn: str = "id", clusterColumn: str = "cluster",
                          separator: str = ",", quote: str = '"',
                          escape: Optional[str] = None):
        body = (await request.body()).decode("utf-8")
        if format == "pairs":
            spec = ImportSpec(ImportFormat.GOLD_PAIRS_CSV, separator=separator,
                              quote=quote, escape=escape,
                              id_column_a=idColumnA, id_column_b=idColumnB)
        elif format == "clusterColumn":
            spec = ImportSpec(ImportFormat.GOLD_CLUSTER_COLUMN_CSV,
                              separator=separator, quote=quote, escape=escape,
                              id_column=idColumn, cluster_column=clusterColumn)
        else:
            raise SchemaError(f"unknown gold standard format {format!r}")
        return gold_json(store.import_gold_standard(body, spec, datasetId,
                                                    name=name))

    @app.get("/goldstandards/{gold_id}")
    def get_gold(gold_id: str):
        return gold_json(store.get_gold_standard(gold_id))

    @app.delete("/goldstandards/{gold_id}", status_code=204)
    def delete_gold(gold_id: str):
        store.delete_gold_standard(gold_id)

    # --- experiments ------------------------------------------------------------------

    @app.get("/experiments")
    def list_experiments():
        return [experiment_json(e) for e in store.list_experiments()]

    @app.post("/experiments", status_code=201)
    async def import_experiment(request: Request, datasetId: str, name: str,
                                solutionId: Optional[str] = None,
                                idColumnA: str = "p1", idColumnB: str = "p2",
                                similarityColumn: Optional[str] = None,
                                separator: str = ",", quote: str = '"',
                                escape: Optional[str] = None):
        body = (await request.body()).decode("utf-8")
        spec = ImportSpec(ImportFormat.EXPERIMENT_CSV, separator=separator,
                          quote=quote, escape=escape,
                          id_column_a=idColumnA, id_column_b=idColumnB,
                          similarity_column=similarityColumn)
        return experiment_json(store.import_experiment(
            body, spec, datasetId, name=name, solution_id=solutionId))

    @app.get("/experiments/{experiment_id}")
    def get_experiment(experiment_id: str):
        return experiment_json(store.get_experiment(experiment_id))

    @app.get("/experiments/{experiment_id}/matches")
    def experiment_matches(experiment_id: str, page: int = 1,
                           pageSize: Optional[int] = None,
                           includeClosure: bool = False):
        experiment = store.get_experiment(experiment_id)
        records = experiment.matches
        if includeClosure:
            dataset = store.get_dataset(experiment.dataset_id)
            records = experiment.all_match_records(dataset.record_count)
        return paginate(records, page, pageSize or config.page_size,
                        lambda m: {"recordA": m.record_a, "recordB": m.record_b,
                                   "similarity": m.similarity,
                                   "isOriginal": m.is_original})

    @app.delete("/experiments/{experiment_id}", status_code=204)
    def delete_experiment(experiment_id: str):
        store.delete_experiment(experiment_id)

    @app.put("/experiments/{experiment_id}/kpis")
    def set_experiment_kpis(experiment_id: str, body: KpiBody):
        experiment = store.set_experiment_kpis(
            experiment_id, experiment_kpis_from_json(body.kpis))
        return experiment_json(experiment)

    # --- solutions --------------------------------------------------------------------

    @app.get("/solutions")
    def list_solutions():
        return [{"id": s.id, "name": s.name,
                 "kpis": solution_kpis_to_json(s.soft_kpis)}
                for s in store.list_solutions()]

    @app.post("/solutions", status_code=201)
    def create_solution(body: SolutionBody):
        solution = store.create_solution(
            body.name, solution_kpis_from_json(body.kpis))
        return {"id": solution.id, "name": solution.name,
                "kpis": solution_kpis_to_json(solution.soft_kpis)}

    @app.get("/solutions/{solution_id}")
    def get_solution(solution_id: str):
        s = store.get_solution(solution_id)
        return {"id": s.id, "name": s.name,
                "kpis": solution_kpis_to_json(s.soft_kpis)}

    @app.delete("/solutions/{solution_id}", status_code=204)
    def delete_solution(solution_id: str):
        store.delete_solution(solution_id)

    @app.put("/solutions/{solution_id}/kpis")
    def set_solution_kpis(solution_id: str, body: KpiBody):
        s = store.set_solution_kpis(solution_id,
                                    solution_kpis_from_json(body.kpis))
        return {"id": s.id, "name": s.name,
                "kpis": solution_kpis_to_json(s.soft_kpis)}

    # --- evaluation --------------------------------------------------------------------

    @app.get("/evaluate/confusion")
    def evaluate_confusion(experimentId: str, goldId: str):
        def compute():
            dataset, experiment, gold = load_pair("", experimentId, goldId)
            return confusion_json(full_confusion(dataset, experiment, gold))
        return cached(("confusion", experimentId, goldId), compute)

    @app.get("/evaluate/metrics")
    def evaluate_metrics(experimentId: str, goldId: str):
        def compute():
            dataset, experiment, gold = load_pair("", experimentId, goldId)
            matrix = full_confusion(dataset, experiment, gold)
            n = dataset.record_count
            exp_clustering = experiment.clustering(n)
            cluster_values = [
                metrics.closest_cluster_f1(exp_clustering, gold.clustering),
                metrics.variation_of_information(exp_clustering, gold.clustering),
                metrics.generalized_merge_distance(exp_clustering, gold.clustering),
            ]
            return {
                "confusion": confusion_json(matrix),
                "pairMetrics": [metric_json(m) for m in metrics.pair_metrics(matrix)],
                "clusterMetrics": [metric_json(m) for m in cluster_values],
                "closureDeficiency": closure_deficiency(
                    n, [m.pair for m in experiment.matches]),
            }
        return cached(("metrics", experimentId, goldId), compute)

    @app.get("/evaluate/diagram")
    def evaluate_diagram(experimentId: str, goldId: str,
                         x: str = "recall", y: str = "precision",
                         s: int = Query(default=10)):
        def compute():
            dataset, experiment, gold = load_pair("", experimentId, goldId)
            points = exploration.metric_metric_diagram(
                dataset, experiment, gold, x, y, s)
            return {"xMetric": x, "yMetric": y,
                    "points": [{"x": p.x, "y": p.y, "threshold": p.threshold,
                                "matrix": confusion_json(p.matrix)}
                               for p in points]}
        return cached(("diagram", experimentId, goldId, x, y, s), compute)

    @app.get("/evaluate/effort-diagram")
    def evaluate_effort_diagram(goldId: str, metric: str = "f1",
                                runningMax: bool = False,
                                experimentIds: Optional[str] = None):
        gold = store.get_gold_standard(goldId)
        dataset = store.get_dataset(gold.dataset_id)
        if experimentIds:
            experiments = [store.get_experiment(e)
                           for e in experimentIds.split(",")]
        else:
            experiments = [e for e in store.list_experiments()
                           if e.dataset_id == dataset.id]
        series = exploration.effort_metric_diagram(
            dataset, experiments, gold, metric=metric, running_max=runningMax)
        return [{"solutionId": s.solution_id,
                 "points": [{"effortHours": p.effort_hours, "value": p.value,
                             "experimentId": p.experiment_id,
                             "experimentName": p.experiment_name}
                            for p in s.points]}
                for s in series]

    @app.post("/evaluate/venn")
    def evaluate_venn(body: VennRequest):
        dataset = store.get_dataset(body.datasetId)
        refs = [SourceRef.parse(r) for r in body.sources]
        experiments, golds = sources_for(dataset, refs)
        regions = exploration.venn_regions(dataset, refs, experiments, golds,
                                           body.pairMode)
        return {"sources": body.sources,
                "regions": [{"members": list(r.members), "count": r.count,
                             "expression": expression_json(r.expression)}
                            for r in regions]}

    @app.post("/evaluate/set")
    def evaluate_set(body: SetRequest):
        dataset = store.get_dataset(body.datasetId)
        expression = body.expression.to_expression()
        refs = [*expression.include, *expression.exclude]
        experiments, golds = sources_for(dataset, refs)
        views = exploration.evaluate_set_expression(dataset, expression,
                                                    experiments, golds)
        if body.sortKey:
            views = exploration.sort_pairs(
                views, key=body.sortKey, descending=body.sortDescending,
                dataset=dataset)
        return paginate(views, body.page, body.pageSize or config.page_size,
                        pair_view_json)

    @app.post("/evaluate/select")
    def evaluate_select(body: SelectRequest):
        dataset = store.get_dataset(body.datasetId)
        experiment = store.get_experiment(body.experimentId)
        gold = store.get_gold_standard(body.goldId) if body.goldId else None
        if body.strategy == "aroundThreshold":
            views = exploration.select_around_threshold(
                dataset, experiment, body.k, threshold=body.threshold,
                proportion=body.proportion, gold=gold)
            return {"strategy": body.strategy,
                    "pairs": [pair_view_json(v) for v in views]}
        if body.strategy == "outliers":
            views = exploration.select_outliers(
                dataset, experiment, gold, body.k, side=body.side,
                threshold=body.threshold)
            return {"strategy": body.strategy,
                    "pairs": [pair_view_json(v) for v in views]}
        if body.strategy == "representatives":
            summaries = exploration.select_representatives(
                dataset, experiment, gold, body.partitions, body.perPartition,
                sampler=body.sampler, seed=body.seed, threshold=body.threshold)
            return {"strategy": body.strategy,
                    "partitions": [{
                        "low": s.low, "high": s.high, "size": s.size,
                        "matrix": confusion_json(s.matrix),
                        "representatives": [pair_view_json(v)
                                            for v in s.representatives],
                    } for s in summaries]}
        if body.strategy == "plainResult":
            views = exploration.evaluate_set_expression(
                dataset,
                SetExpression(
                    include=(SourceRef("experiment", experiment.id),),
                    pair_mode="originalOnly"),
                {experiment.id: experiment}, {})
            return {"strategy": body.strategy,
                    "pairs": [pair_view_json(v) for v in views]}
        raise ValueError(f"unknown selection strategy {body.strategy!r}")

    @app.post("/evaluate/explain-error")
    def evaluate_explain_error(body: ExplainErrorRequest):
        dataset, experiment, gold = load_pair(body.datasetId,
                                              body.experimentId, body.goldId)
        entropies = exploration.column_entropy(dataset)
        candidates = exploration.correctly_classified_pairs(
            experiment, gold, threshold=body.threshold,
            cap=body.candidateCap, entropies=entropies)
        sim = exploration.default_record_similarity(dataset)
        pair = (min(body.pair), max(body.pair))
        best, score = exploration.explain_error(pair, candidates, sim, body.q)
        gold_pairs = gold.pair_set()
        view = exploration.PairView(
            pair=best,
            native_ids=(dataset.native_ids[best[0]], dataset.native_ids[best[1]]),
            records=(tuple(dataset.records[best[0]]),
                     tuple(dataset.records[best[1]])),
            similarity=experiment.similarity_of(best),
            labels={f"experiment:{experiment.id}": True},
            classification="TP" if best in gold_pairs else "TN",
        )
        return {"counterpart": pair_view_json(view), "score": score}

    @app.get("/evaluate/null-ratio")
    def evaluate_null_ratio(experimentId: str, goldId: str,
                            universe: str = "union"):
        dataset, experiment, gold = load_pair("", experimentId, goldId)
        ratios = exploration.null_ratio(dataset, experiment, gold, universe)
        return [{"attribute": r.attribute, "ratio": r.ratio,
                 "falseCount": r.false_count, "totalCount": r.total_count}
                for r in ratios]

    @app.get("/evaluate/equal-ratio")
    def evaluate_equal_ratio(experimentId: str, goldId: str,
                             universe: str = "union"):
        dataset, experiment, gold = load_pair("", experimentId, goldId)
        ratios = exploration.equal_ratio(dataset, experiment, gold, universe)
        return [{"attribute": r.attribute, "ratio": r.ratio,
                 "falseCount": r.false_count, "totalCount": r.total_count}
                for r in ratios]

    def profile_json(profile: metrics.DatasetProfile) -> dict:
        return {"name": profile.name, "sparsity": profile.sparsity,
                "textuality": profile.textuality,
                "tupleCount": profile.tuple_count,
                "positiveRatio": profile.positive_ratio,
                "vocabularySize": len(profile.vocabulary)}

    def profile_of(dataset_id: str, gold_id: Optional[str]):
        dataset = store.get_dataset(dataset_id)
        gold = None
        if gold_id:
            gold = store.get_gold_standard(gold_id)
        else:
            for candidate in store.list_gold_standards():
                if candidate.dataset_id == dataset_id:
                    gold = candidate
                    break
        return metrics.profile_dataset(dataset, gold)

    @app.get("/evaluate/profile")
    def evaluate_profile(datasetId: str, goldId: Optional[str] = None):
        return profile_json(profile_of(datasetId, goldId))

    @app.post("/evaluate/rank-benchmarks")
    def evaluate_rank(body: RankRequest):
        target = profile_of(body.targetDatasetId, None)
        candidates = [profile_of(d, None) for d in body.candidateDatasetIds]
        ranked = metrics.rank_benchmark_datasets(candidates, target,
                                                 body.weights)
        return [{"name": r.name, "score": r.score, "distances": r.distances}
                for r in ranked]

    @app.get("/evaluate/majority-vote")
    def evaluate_majority_vote(experimentIds: str):
        ids = [e for e in experimentIds.split(",") if e]
        experiments = [store.get_experiment(e) for e in ids]
        dataset_ids = {e.dataset_id for e in experiments}
        if len(dataset_ids) > 1:
            raise MatchevalError("experiments cover different datasets")
        dataset = store.get_dataset(next(iter(dataset_ids))) if dataset_ids else None
        pair_sets = [e.pair_set(dataset.record_count, "closure")
                     for e in experiments]
        deviations = metrics.majority_vote_deviation(pair_sets, names=ids)
        return [{"experimentId": e, "deviations": deviations[e]} for e in ids]

    # --- soft KPIs ----------------------------------------------------------------------

    def matrix_rows(body: DecisionMatrixRequest):
        solutions = store.list_solutions()
        if body.solutionIds is not None:
            wanted = set(body.solutionIds)
            solutions = [s for s in solutions if s.id in wanted]
            for missing in wanted - {s.id for s in solutions}:
                raise NotFound(f"no solution with id {missing!r}")
        gold = store.get_gold_standard(body.goldId) if body.goldId else None
        dataset = store.get_dataset(gold.dataset_id) if gold else None
        experiments = [e for e in store.list_experiments()
                       if dataset is None or e.dataset_id == dataset.id]
        rate = (softkpi.RateTable([tuple(p) for p in body.ratePoints])
                if body.ratePoints else None)
        return softkpi.decision_matrix(
            solutions, experiments, gold,
            record_count=dataset.record_count if dataset else 0,
            metric_names=body.metrics, best_by=body.bestBy, rate=rate), rate

    def row_json(row: softkpi.DecisionRow) -> dict:
        return {
            "solutionId": row.solution_id,
            "solutionName": row.solution_name,
            "generalCosts": row.general_costs,
            "efforts": {k: (None if v is None else
                            {"hrAmount": v.hr_amount, "expertise": v.expertise})
                        for k, v in row.efforts.items()},
            "effortCosts": row.effort_costs,
            "deploymentType": row.deployment_type,
            "interfaces": row.interfaces,
            "techniques": row.techniques,
            "bestExperimentId": row.best_experiment_id,
            "setupEffortCost": row.setup_effort_cost,
            "runtimeSeconds": row.runtime_seconds,
            "metrics": row.metrics,
        }

    @app.post("/kpi/decision-matrix")
    def kpi_decision_matrix(body: DecisionMatrixRequest):
        rows, _ = matrix_rows(body)
        return {"rows": [row_json(r) for r in rows]}

    @app.post("/kpi/sheet", status_code=201)
    async def kpi_sheet(request: Request, kind: str = "solutions",
                        separator: str = ","):
        body = (await request.body()).decode("utf-8")
        if kind == "solutions":
            solutions = store.import_solution_kpi_sheet(body, separator)
            return {"applied": [s.name for s in solutions]}
        if kind == "experiments":
            experiments = store.import_experiment_kpi_sheet(body, separator)
            return {"applied": [e.name for e in experiments]}
        raise SchemaError(f"unknown KPI sheet kind {kind!r}")

    @app.post("/kpi/aggregate")
    def kpi_aggregate(body: AggregateRequest):
        rows, rate = matrix_rows(body)
        spec = softkpi.AggregationSpec(
            terms=tuple(softkpi.AggregationTerm(t.source, t.weight)
                        for t in body.terms),
            rate=rate or softkpi.RateTable())
        scores = softkpi.aggregate_scores(spec, rows)
        ranked = sorted(rows, key=lambda r: (-scores[r.solution_id],
                                             r.solution_name))
        return {"scores": [{"solutionId": r.solution_id,
                            "solutionName": r.solution_name,
                            "score": scores[r.solution_id]} for r in ranked]}

    if config.static_dir and Path(config.static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/app", StaticFiles(directory=config.static_dir, html=True),
                  name="explorer")

    return app


def run(config: ApiConfig) -> None:  # pragma: no cover - thin wrapper
    import uvicorn
    uvicorn.run(create_app(config), host=config.host, port=config.port,
                log_level="warning")
