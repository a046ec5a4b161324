"""Domain entities: datasets, experiments, gold standards, solutions.

Records are addressed by dense numeric IDs assigned at import time in
first-appearance order; the native (textual) IDs stay resolvable through
the dataset's id index.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .clustering import Clustering, MergeRecord, Pair
from .errors import UnknownRecordId
from .softkpi import ExperimentKpis, SolutionKpis


class ImportFormat(str, enum.Enum):
    DATASET_CSV = "datasetCsv"
    GOLD_PAIRS_CSV = "goldPairsCsv"
    GOLD_CLUSTER_COLUMN_CSV = "goldClusterColumnCsv"
    EXPERIMENT_CSV = "experimentCsv"


@dataclass
class ImportSpec:
    """How to read a delimited file: symbols plus column mapping."""

    format: ImportFormat
    separator: str = ","
    quote: str = '"'
    escape: Optional[str] = None
    id_column: Optional[str] = None
    id_column_a: Optional[str] = None
    id_column_b: Optional[str] = None
    similarity_column: Optional[str] = None
    cluster_column: Optional[str] = None


@dataclass(frozen=True)
class MatchRecord:
    """One matched record pair, stored in canonical (a < b) order."""

    record_a: int
    record_b: int
    similarity: Optional[float] = None
    is_original: bool = True

    @property
    def pair(self) -> Pair:
        return (self.record_a, self.record_b)


@dataclass
class Dataset:
    id: str
    name: str
    attribute_names: list[str]
    native_ids: list[str]
    records: list[list[Optional[str]]]
    id_index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id_index:
            self.id_index = {nid: i for i, nid in enumerate(self.native_ids)}

    @property
    def record_count(self) -> int:
        return len(self.native_ids)

    def dense_id(self, native_id: str) -> int:
        try:
            return self.id_index[native_id]
        except KeyError:
            raise UnknownRecordId(
                f"record {native_id!r} is not part of dataset {self.name!r}"
            ) from None

    def value(self, dense_id: int, attribute_index: int) -> Optional[str]:
        return self.records[dense_id][attribute_index]

    def total_pairs(self) -> int:
        n = self.record_count
        return n * (n - 1) // 2


@dataclass
class GoldStandard:
    id: str
    dataset_id: str
    clustering: Clustering
    name: str = ""

    def pair_set(self) -> set[Pair]:
        return self.clustering.pair_set()


@dataclass
class Experiment:
    id: str
    name: str
    dataset_id: str
    matches: list[MatchRecord]
    solution_id: Optional[str] = None
    soft_kpis: Optional[ExperimentKpis] = None

    def scored_matches(self) -> list[MatchRecord]:
        return [m for m in self.matches if m.similarity is not None]

    def decision_threshold(self) -> Optional[float]:
        """Default decision threshold: the least similarity the solution
        still reported as a match."""
        sims = [m.similarity for m in self.matches if m.similarity is not None]
        return min(sims) if sims else None

    def clustering(self, record_count: int) -> Clustering:
        return Clustering.from_pairs(record_count, (m.pair for m in self.matches))

    def closure_pairs(self, record_count: int) -> set[Pair]:
        return self.clustering(record_count).pair_set()

    def all_match_records(self, record_count: int) -> list[MatchRecord]:
        """Original matches plus the pairs added by transitive closure,
        the latter flagged ``is_original=False``."""
        original = {m.pair: m for m in self.matches}
        out = list(self.matches)
        for pair in sorted(self.closure_pairs(record_count) - original.keys()):
            out.append(MatchRecord(pair[0], pair[1], None, is_original=False))
        return out

    def pair_set(self, record_count: int, mode: str = "closure") -> set[Pair]:
        if mode == "originalOnly":
            return {m.pair for m in self.matches}
        if mode == "closure":
            return self.closure_pairs(record_count)
        raise ValueError(f"unknown pair mode {mode!r}")

    def similarity_of(self, pair: Pair) -> Optional[float]:
        if not hasattr(self, "_sim_index"):
            self._sim_index = {m.pair: m.similarity for m in self.matches}
        return self._sim_index.get(pair)


@dataclass
class MatchingSolution:
    id: str
    name: str
    soft_kpis: Optional[SolutionKpis] = None
