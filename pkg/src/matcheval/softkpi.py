"""Soft KPIs: effort, cost and categorical properties of matching
solutions, plus KPI sheets, the decision matrix and user-defined
aggregation."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, IO, Optional, Sequence

from .clustering import confusion_matrix_sequence
from .errors import MissingTerm, SchemaError
from .metrics import pair_metric, pair_metrics

if TYPE_CHECKING:  # pragma: no cover
    from .model import Experiment, GoldStandard, MatchingSolution


DEPLOYMENT_TYPES = {"onPremise", "cloud"}
INTERFACES = {"gui", "api", "cli"}
TECHNIQUES = {"ruleBased", "clustering", "probabilistic", "ml", "other"}


@dataclass(frozen=True)
class EffortEntry:
    """Human effort as hours plus the expert's skill level (0-100)."""

    hr_amount: float
    expertise: int

    def __post_init__(self):
        if self.hr_amount < 0:
            raise ValueError("hr_amount must be >= 0")
        if not 0 <= self.expertise <= 100:
            raise ValueError("expertise must be within [0, 100]")


@dataclass
class SolutionKpis:
    general_costs: Optional[float] = None
    integration_effort: Optional[EffortEntry] = None
    domain_config_effort: Optional[EffortEntry] = None
    technique_config_effort: Optional[EffortEntry] = None
    deployment_type: set[str] = field(default_factory=set)
    interfaces: set[str] = field(default_factory=set)
    techniques: set[str] = field(default_factory=set)

    def __post_init__(self):
        for value, allowed, label in (
            (self.deployment_type, DEPLOYMENT_TYPES, "deployment type"),
            (self.interfaces, INTERFACES, "interface"),
            (self.techniques, TECHNIQUES, "technique"),
        ):
            unknown = set(value) - allowed
            if unknown:
                raise ValueError(f"unknown {label}: {sorted(unknown)}")


@dataclass
class ExperimentKpis:
    setup_effort: Optional[EffortEntry] = None
    runtime_seconds: Optional[float] = None

    def __post_init__(self):
        if self.runtime_seconds is not None and self.runtime_seconds < 0:
            raise ValueError("runtime must be >= 0")


class RateTable:
    """Piecewise-linear hourly rate as a function of expertise.

    Defined by (expertise, rate) anchor points; values between anchors
    are interpolated linearly, values outside clamp to the nearest
    anchor.  The default is a flat rate of 1.
    """

    def __init__(self, points: Sequence[tuple[float, float]] = ((0.0, 1.0),)):
        if not points:
            raise ValueError("rate table needs at least one point")
        self.points = sorted((float(x), float(r)) for x, r in points)
        if any(r < 0 for _, r in self.points):
            raise ValueError("rates must be non-negative")

    def rate(self, expertise: float) -> float:
        pts = self.points
        if expertise <= pts[0][0]:
            return pts[0][1]
        if expertise >= pts[-1][0]:
            return pts[-1][1]
        for (x0, r0), (x1, r1) in zip(pts, pts[1:]):
            if x0 <= expertise <= x1:
                if x1 == x0:
                    return r1
                return r0 + (r1 - r0) * (expertise - x0) / (x1 - x0)
        raise AssertionError("unreachable")


def effort_cost(entry: EffortEntry, rate: RateTable | None = None) -> float:
    """Monetary estimate: hours times the expertise-dependent rate."""
    table = rate or RateTable()
    return entry.hr_amount * table.rate(entry.expertise)


EFFORT_FIELDS = ("integration", "domainConfig", "techniqueConfig")

# KPI sheet column names (one row per solution / experiment):
SOLUTION_SHEET_COLUMNS = (
    "solution", "generalCosts",
    "integrationHours", "integrationExpertise",
    "domainConfigHours", "domainConfigExpertise",
    "techniqueConfigHours", "techniqueConfigExpertise",
    "deploymentType", "interfaces", "techniques",  # ';'-separated sets
)
EXPERIMENT_SHEET_COLUMNS = (
    "experiment", "setupHours", "setupExpertise", "runtimeSeconds",
)


def _rows(stream: IO[str] | str, key_column: str, separator: str):
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.DictReader(stream, delimiter=separator)
    if reader.fieldnames is None or key_column not in reader.fieldnames:
        raise SchemaError(f"KPI sheet needs a {key_column!r} column")
    return reader


def _number(row: dict, column: str) -> Optional[float]:
    value = (row.get(column) or "").strip()
    return float(value) if value else None


def _effort(row: dict, prefix: str) -> Optional[EffortEntry]:
    hours = _number(row, f"{prefix}Hours")
    expertise = _number(row, f"{prefix}Expertise")
    if hours is None:
        return None
    return EffortEntry(hours, int(expertise) if expertise is not None else 0)


def _set(row: dict, column: str) -> set[str]:
    value = (row.get(column) or "").strip()
    return {part.strip() for part in value.split(";") if part.strip()}


def parse_solution_kpi_sheet(stream: IO[str] | str,
                             separator: str = ",") -> list[tuple[str, SolutionKpis]]:
    """One row per solution; see SOLUTION_SHEET_COLUMNS. Empty cells stay
    absent, set-valued cells use ';' between entries."""
    out = []
    for row in _rows(stream, "solution", separator):
        kpis = SolutionKpis(
            general_costs=_number(row, "generalCosts"),
            integration_effort=_effort(row, "integration"),
            domain_config_effort=_effort(row, "domainConfig"),
            technique_config_effort=_effort(row, "techniqueConfig"),
            deployment_type=_set(row, "deploymentType"),
            interfaces=_set(row, "interfaces"),
            techniques=_set(row, "techniques"),
        )
        out.append((row["solution"], kpis))
    return out


def parse_experiment_kpi_sheet(stream: IO[str] | str,
                               separator: str = ",") -> list[tuple[str, ExperimentKpis]]:
    """One row per experiment; see EXPERIMENT_SHEET_COLUMNS."""
    out = []
    for row in _rows(stream, "experiment", separator):
        kpis = ExperimentKpis(
            setup_effort=_effort(row, "setup"),
            runtime_seconds=_number(row, "runtimeSeconds"),
        )
        out.append((row["experiment"], kpis))
    return out


def _solution_efforts(kpis: SolutionKpis) -> dict[str, Optional[EffortEntry]]:
    return {
        "integration": kpis.integration_effort,
        "domainConfig": kpis.domain_config_effort,
        "techniqueConfig": kpis.technique_config_effort,
    }


@dataclass
class DecisionRow:
    solution_id: str
    solution_name: str
    general_costs: Optional[float]
    efforts: dict[str, Optional[EffortEntry]]
    effort_costs: dict[str, Optional[float]]
    deployment_type: list[str]
    interfaces: list[str]
    techniques: list[str]
    best_experiment_id: Optional[str]
    setup_effort: Optional[EffortEntry]
    setup_effort_cost: Optional[float]
    runtime_seconds: Optional[float]
    metrics: dict[str, Optional[float]]


def _experiment_confusion(experiment: "Experiment", gold: "GoldStandard",
                          record_count: int):
    matches = [(m.record_a, m.record_b, m.similarity)
               for m in experiment.matches]
    return confusion_matrix_sequence(
        record_count, gold.clustering, matches, 2)[-1]


def decision_matrix(
    solutions: Sequence["MatchingSolution"],
    experiments: Sequence["Experiment"],
    gold: Optional["GoldStandard"],
    record_count: int = 0,
    metric_names: Sequence[str] = ("precision", "recall", "f1"),
    best_by: str = "f1",
    rate: RateTable | None = None,
) -> list[DecisionRow]:
    """One row per solution: categorical KPIs, effort and cost cells, and
    the quality metrics of its best experiment.

    The best experiment is the one maximizing ``best_by`` (undefined
    metric values rank lowest).  Missing KPIs stay ``None``, never zero.
    """
    table = rate or RateTable()
    rows = []
    for solution in solutions:
        kpis = solution.soft_kpis or SolutionKpis()
        efforts = _solution_efforts(kpis)
        costs = {name: (effort_cost(entry, table) if entry else None)
                 for name, entry in efforts.items()}

        best = None
        best_value = None
        if gold is not None:
            for experiment in experiments:
                if experiment.solution_id != solution.id:
                    continue
                matrix = _experiment_confusion(experiment, gold, record_count)
                value = pair_metric(best_by, matrix).value
                rank = -1.0 if value is None else value
                if best is None or rank > best_value:
                    best, best_value = experiment, rank
        metric_cells: dict[str, Optional[float]] = {}
        setup = runtime = setup_cost = None
        if best is not None:
            matrix = _experiment_confusion(best, gold, record_count)
            by_name = {m.name: m.value for m in pair_metrics(matrix)}
            metric_cells = {name: by_name.get(name) for name in metric_names}
            if best.soft_kpis is not None:
                setup = best.soft_kpis.setup_effort
                runtime = best.soft_kpis.runtime_seconds
                if setup is not None:
                    setup_cost = effort_cost(setup, table)
        else:
            metric_cells = {name: None for name in metric_names}

        rows.append(DecisionRow(
            solution_id=solution.id,
            solution_name=solution.name,
            general_costs=kpis.general_costs,
            efforts=efforts,
            effort_costs=costs,
            deployment_type=sorted(kpis.deployment_type),
            interfaces=sorted(kpis.interfaces),
            techniques=sorted(kpis.techniques),
            best_experiment_id=best.id if best is not None else None,
            setup_effort=setup,
            setup_effort_cost=setup_cost,
            runtime_seconds=runtime,
            metrics=metric_cells,
        ))
    return rows


@dataclass(frozen=True)
class AggregationTerm:
    """One weighted ingredient of a use-case specific score.

    ``source`` picks the value from a decision row: ``generalCosts``,
    ``effortCost:<integration|domainConfig|techniqueConfig|setup>``,
    ``runtime`` or ``metric:<name>``.
    """

    source: str
    weight: float


@dataclass
class AggregationSpec:
    terms: tuple[AggregationTerm, ...]
    rate: RateTable = field(default_factory=RateTable)


def _term_value(row: DecisionRow, source: str) -> Optional[float]:
    if source == "generalCosts":
        return row.general_costs
    if source == "runtime":
        return row.runtime_seconds
    if source.startswith("effortCost:"):
        which = source.split(":", 1)[1]
        if which == "setup":
            return row.setup_effort_cost
        return row.effort_costs.get(which)
    if source.startswith("metric:"):
        return row.metrics.get(source.split(":", 1)[1])
    raise MissingTerm(f"unknown aggregation source {source!r}")


def aggregate_scores(spec: AggregationSpec,
                     rows: Sequence[DecisionRow]) -> dict[str, float]:
    """Weighted sum of per-term min-max normalized values per solution.

    Normalization bounds come from the compared set itself, so with two
    solutions each term contributes exactly its weight to one of them and
    0 to the other.  A term missing on any row raises :class:`MissingTerm`.
    """
    if not rows:
        return {}
    values: dict[str, list[float]] = {}
    for term in spec.terms:
        series = []
        for row in rows:
            value = _term_value(row, term.source)
            if value is None:
                raise MissingTerm(
                    f"solution {row.solution_name!r} has no value for "
                    f"term {term.source!r}")
            series.append(float(value))
        values[term.source] = series

    scores = {row.solution_id: 0.0 for row in rows}
    for term in spec.terms:
        series = values[term.source]
        low, high = min(series), max(series)
        span = high - low
        for row, value in zip(rows, series):
            normalized = 0.0 if span == 0 else (value - low) / span
            scores[row.solution_id] += term.weight * normalized
    return scores
