"""Embedded, file-backed entity store.

Every entity lives in its own JSON document under the data directory, so
the store needs no server process and travels with the directory.
Writes go through a temp file plus atomic rename and are serialized by a
file lock; readers either see the previous or the new document, never a
partial one.
"""

from __future__ import annotations

import json
import os
import tempfile
import uuid
from pathlib import Path
from typing import IO, Optional

from filelock import FileLock

from . import csvio
from .clustering import Clustering
from .errors import DuplicateEntity, NotFound
from .model import (
    Dataset,
    Experiment,
    GoldStandard,
    ImportSpec,
    MatchingSolution,
    MatchRecord,
)
from .softkpi import EffortEntry, ExperimentKpis, SolutionKpis

DATASETS = "datasets"
GOLD = "goldstandards"
EXPERIMENTS = "experiments"
SOLUTIONS = "solutions"
KINDS = (DATASETS, GOLD, EXPERIMENTS, SOLUTIONS)


def _new_id() -> str:
    return uuid.uuid4().hex[:12]


def _effort_to_json(entry: Optional[EffortEntry]):
    if entry is None:
        return None
    return {"hrAmount": entry.hr_amount, "expertise": entry.expertise}


def _effort_from_json(data) -> Optional[EffortEntry]:
    if data is None:
        return None
    return EffortEntry(data["hrAmount"], data["expertise"])


def solution_kpis_to_json(kpis: Optional[SolutionKpis]):
    if kpis is None:
        return None
    return {
        "generalCosts": kpis.general_costs,
        "integrationEffort": _effort_to_json(kpis.integration_effort),
        "domainConfigEffort": _effort_to_json(kpis.domain_config_effort),
        "techniqueConfigEffort": _effort_to_json(kpis.technique_config_effort),
        "deploymentType": sorted(kpis.deployment_type),
        "interfaces": sorted(kpis.interfaces),
        "techniques": sorted(kpis.techniques),
    }


def solution_kpis_from_json(data) -> Optional[SolutionKpis]:
    if data is None:
        return None
    return SolutionKpis(
        general_costs=data.get("generalCosts"),
        integration_effort=_effort_from_json(data.get("integrationEffort")),
        domain_config_effort=_effort_from_json(data.get("domainConfigEffort")),
        technique_config_effort=_effort_from_json(data.get("techniqueConfigEffort")),
        deployment_type=set(data.get("deploymentType", [])),
        interfaces=set(data.get("interfaces", [])),
        techniques=set(data.get("techniques", [])),
    )


def experiment_kpis_to_json(kpis: Optional[ExperimentKpis]):
    if kpis is None:
        return None
    return {
        "setupEffort": _effort_to_json(kpis.setup_effort),
        "runtimeSeconds": kpis.runtime_seconds,
    }


def experiment_kpis_from_json(data) -> Optional[ExperimentKpis]:
    if data is None:
        return None
    return ExperimentKpis(
        setup_effort=_effort_from_json(data.get("setupEffort")),
        runtime_seconds=data.get("runtimeSeconds"),
    )


class Store:
    """Persistence for datasets, gold standards, experiments, solutions."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        for kind in KINDS:
            (self.data_dir / kind).mkdir(parents=True, exist_ok=True)
        self._lock = FileLock(str(self.data_dir / ".lock"))
        # bumped on every mutation; lets evaluation caches invalidate
        self.mutation_count = 0

    # --- low-level document handling --------------------------------------

    def _path(self, kind: str, entity_id: str) -> Path:
        return self.data_dir / kind / f"{entity_id}.json"

    def _write(self, kind: str, entity_id: str, payload: dict) -> None:
        path = self._path(kind, entity_id)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(payload, handle)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.mutation_count += 1

    def _read(self, kind: str, entity_id: str) -> dict:
        path = self._path(kind, entity_id)
        if not path.exists():
            raise NotFound(f"no {kind[:-1]} with id {entity_id!r}")
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)

    def _ids(self, kind: str) -> list[str]:
        return sorted(p.stem for p in (self.data_dir / kind).glob("*.json"))

    def _delete(self, kind: str, entity_id: str) -> None:
        path = self._path(kind, entity_id)
        if not path.exists():
            raise NotFound(f"no {kind[:-1]} with id {entity_id!r}")
        path.unlink()
        self.mutation_count += 1

    def _check_name_free(self, kind: str, name: str) -> None:
        for entity_id in self._ids(kind):
            if self._read(kind, entity_id).get("name") == name:
                raise DuplicateEntity(
                    f"a {kind[:-1]} named {name!r} already exists")

    # --- datasets -----------------------------------------------------------

    def import_dataset(self, stream: IO[str] | str, spec: ImportSpec,
                       name: str) -> Dataset:
        with self._lock:
            self._check_name_free(DATASETS, name)
            attributes, native_ids, records = csvio.parse_dataset(stream, spec)
            dataset = Dataset(
                id=_new_id(), name=name, attribute_names=attributes,
                native_ids=native_ids, records=records)
            self._write(DATASETS, dataset.id, {
                "name": dataset.name,
                "attributeNames": dataset.attribute_names,
                "nativeIds": dataset.native_ids,
                "records": dataset.records,
            })
        return dataset

    def get_dataset(self, dataset_id: str) -> Dataset:
        data = self._read(DATASETS, dataset_id)
        return Dataset(
            id=dataset_id, name=data["name"],
            attribute_names=data["attributeNames"],
            native_ids=data["nativeIds"], records=data["records"])

    def list_datasets(self) -> list[Dataset]:
        return [self.get_dataset(i) for i in self._ids(DATASETS)]

    def delete_dataset(self, dataset_id: str) -> None:
        """Deleting a dataset also removes its experiments and golds."""
        with self._lock:
            self._delete(DATASETS, dataset_id)
            for kind, key in ((GOLD, "datasetId"), (EXPERIMENTS, "datasetId")):
                for entity_id in self._ids(kind):
                    if self._read(kind, entity_id).get(key) == dataset_id:
                        self._delete(kind, entity_id)

    # --- gold standards -------------------------------------------------------

    def import_gold_standard(self, stream, spec: ImportSpec, dataset_id: str,
                             name: str = "") -> GoldStandard:
        with self._lock:
            dataset = self.get_dataset(dataset_id)
            clustering = csvio.parse_gold_standard(stream, spec, dataset)
            gold = GoldStandard(id=_new_id(), dataset_id=dataset_id,
                                clustering=clustering, name=name)
            labels = clustering.labels()
            self._write(GOLD, gold.id, {
                "name": name, "datasetId": dataset_id, "labels": labels})
        return gold

    def get_gold_standard(self, gold_id: str) -> GoldStandard:
        data = self._read(GOLD, gold_id)
        return GoldStandard(
            id=gold_id, dataset_id=data["datasetId"],
            clustering=Clustering.from_labels(data["labels"]),
            name=data.get("name", ""))

    def list_gold_standards(self) -> list[GoldStandard]:
        return [self.get_gold_standard(i) for i in self._ids(GOLD)]

    def delete_gold_standard(self, gold_id: str) -> None:
        with self._lock:
            self._delete(GOLD, gold_id)

    # --- experiments ------------------------------------------------------------

    def import_experiment(self, stream, spec: ImportSpec, dataset_id: str,
                          name: str, solution_id: Optional[str] = None,
                          kpis: Optional[ExperimentKpis] = None) -> Experiment:
        with self._lock:
            self._check_name_free(EXPERIMENTS, name)
            dataset = self.get_dataset(dataset_id)
            if solution_id is not None:
                self._read(SOLUTIONS, solution_id)
            matches = csvio.parse_experiment(stream, spec, dataset)
            experiment = Experiment(
                id=_new_id(), name=name, dataset_id=dataset_id,
                matches=matches, solution_id=solution_id, soft_kpis=kpis)
            self._write_experiment(experiment)
        return experiment

    def _write_experiment(self, experiment: Experiment) -> None:
        self._write(EXPERIMENTS, experiment.id, {
            "name": experiment.name,
            "datasetId": experiment.dataset_id,
            "solutionId": experiment.solution_id,
            "matches": [[m.record_a, m.record_b, m.similarity]
                        for m in experiment.matches],
            "softKpis": experiment_kpis_to_json(experiment.soft_kpis),
        })

    def get_experiment(self, experiment_id: str) -> Experiment:
        data = self._read(EXPERIMENTS, experiment_id)
        matches = [MatchRecord(a, b, sim, is_original=True)
                   for a, b, sim in data["matches"]]
        return Experiment(
            id=experiment_id, name=data["name"], dataset_id=data["datasetId"],
            matches=matches, solution_id=data.get("solutionId"),
            soft_kpis=experiment_kpis_from_json(data.get("softKpis")))

    def list_experiments(self) -> list[Experiment]:
        return [self.get_experiment(i) for i in self._ids(EXPERIMENTS)]

    def delete_experiment(self, experiment_id: str) -> None:
        with self._lock:
            self._delete(EXPERIMENTS, experiment_id)

    def set_experiment_kpis(self, experiment_id: str,
                            kpis: Optional[ExperimentKpis]) -> Experiment:
        with self._lock:
            experiment = self.get_experiment(experiment_id)
            experiment.soft_kpis = kpis
            self._write_experiment(experiment)
        return experiment

    # --- solutions ----------------------------------------------------------------

    def create_solution(self, name: str,
                        kpis: Optional[SolutionKpis] = None) -> MatchingSolution:
        with self._lock:
            self._check_name_free(SOLUTIONS, name)
            solution = MatchingSolution(id=_new_id(), name=name, soft_kpis=kpis)
            self._write(SOLUTIONS, solution.id, {
                "name": name, "softKpis": solution_kpis_to_json(kpis)})
        return solution

    def get_solution(self, solution_id: str) -> MatchingSolution:
        data = self._read(SOLUTIONS, solution_id)
        return MatchingSolution(
            id=solution_id, name=data["name"],
            soft_kpis=solution_kpis_from_json(data.get("softKpis")))

    def list_solutions(self) -> list[MatchingSolution]:
        return [self.get_solution(i) for i in self._ids(SOLUTIONS)]

    def delete_solution(self, solution_id: str) -> None:
        with self._lock:
            self._delete(SOLUTIONS, solution_id)

    def set_solution_kpis(self, solution_id: str,
                          kpis: Optional[SolutionKpis]) -> MatchingSolution:
        with self._lock:
            solution = self.get_solution(solution_id)
            solution.soft_kpis = kpis
            self._write(SOLUTIONS, solution.id, {
                "name": solution.name,
                "softKpis": solution_kpis_to_json(kpis)})
        return solution

    # --- KPI sheets -----------------------------------------------------------

    def import_solution_kpi_sheet(self, stream,
                                  separator: str = ",") -> list[MatchingSolution]:
        """Apply a solution KPI sheet; rows create missing solutions by
        name and overwrite the KPIs of existing ones."""
        from .softkpi import parse_solution_kpi_sheet
        by_name = {s.name: s for s in self.list_solutions()}
        out = []
        for name, kpis in parse_solution_kpi_sheet(stream, separator):
            if name in by_name:
                out.append(self.set_solution_kpis(by_name[name].id, kpis))
            else:
                out.append(self.create_solution(name, kpis))
        return out

    def import_experiment_kpi_sheet(self, stream,
                                    separator: str = ",") -> list[Experiment]:
        """Apply an experiment KPI sheet; rows address experiments by
        name and must match an existing experiment."""
        from .softkpi import parse_experiment_kpi_sheet
        by_name = {e.name: e for e in self.list_experiments()}
        out = []
        for name, kpis in parse_experiment_kpi_sheet(stream, separator):
            if name not in by_name:
                raise NotFound(f"no experiment named {name!r}")
            out.append(self.set_experiment_kpis(by_name[name].id, kpis))
        return out
