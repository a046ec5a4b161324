"""Delimited-file parsing for datasets, gold standards and experiments.

Files are RFC-4180-style with configurable separator, quote and escape
symbols.  An empty field is null, whether quoted or not.
"""

from __future__ import annotations

import csv
import io
import math
from typing import IO, Iterable, Iterator, Optional

from .clustering import Clustering
from .errors import (
    DuplicateRecordId,
    RowArityError,
    SchemaError,
    SelfPairError,
)
from .model import Dataset, ImportFormat, ImportSpec, MatchRecord


def _reader(stream: IO[str] | str, spec: ImportSpec) -> Iterator[list[str]]:
    if isinstance(stream, (str, bytes)):
        if isinstance(stream, bytes):
            stream = stream.decode("utf-8")
        stream = io.StringIO(stream)
    return csv.reader(
        stream,
        delimiter=spec.separator,
        quotechar=spec.quote,
        escapechar=spec.escape,
        doublequote=spec.escape is None,
    )


def _null(value: str) -> Optional[str]:
    return value if value != "" else None


def _header(rows: Iterator[list[str]], required: Iterable[str]) -> list[str]:
    header = next(rows, None)
    if header is None:
        raise SchemaError("file has no header row")
    missing = [c for c in required if c not in header]
    if missing:
        raise SchemaError(f"missing required column(s): {missing}")
    return header


def parse_dataset(stream, spec: ImportSpec) -> tuple[list[str], list[str], list[list[Optional[str]]]]:
    """Returns (attribute names, native IDs in file order, record rows)."""
    if not spec.id_column:
        raise SchemaError("dataset import needs an id column")
    rows = _reader(stream, spec)
    header = _header(rows, [spec.id_column])
    id_pos = header.index(spec.id_column)
    attributes = [c for i, c in enumerate(header) if i != id_pos]

    native_ids: list[str] = []
    seen: set[str] = set()
    records: list[list[Optional[str]]] = []
    for line, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise RowArityError(
                f"line {line}: expected {len(header)} fields, got {len(row)}")
        native = row[id_pos]
        if native in seen:
            raise DuplicateRecordId(f"line {line}: duplicate record id {native!r}")
        seen.add(native)
        native_ids.append(native)
        records.append([_null(v) for i, v in enumerate(row) if i != id_pos])
    return attributes, native_ids, records


def parse_gold_standard(stream, spec: ImportSpec, dataset: Dataset) -> Clustering:
    """Builds the ground-truth clustering from either supported format.

    Pair lists are transitively closed; records not mentioned stay
    singletons.  Cluster columns group records by label, a null label
    meaning singleton.  Both encodings of the same partition produce the
    same clustering.
    """
    if spec.format == ImportFormat.GOLD_PAIRS_CSV:
        pairs = [(a, b) for a, b, _ in
                 _parse_pair_rows(stream, spec, dataset, similarity=False)]
        return Clustering.from_pairs(dataset.record_count, pairs)
    if spec.format == ImportFormat.GOLD_CLUSTER_COLUMN_CSV:
        if not (spec.id_column and spec.cluster_column):
            raise SchemaError("cluster-column import needs id and cluster columns")
        rows = _reader(stream, spec)
        header = _header(rows, [spec.id_column, spec.cluster_column])
        id_pos = header.index(spec.id_column)
        cluster_pos = header.index(spec.cluster_column)
        labels: list[Optional[str]] = [None] * dataset.record_count
        for line, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise RowArityError(
                    f"line {line}: expected {len(header)} fields, got {len(row)}")
            dense = dataset.dense_id(row[id_pos])
            labels[dense] = _null(row[cluster_pos])
        return Clustering.from_labels(labels)
    raise SchemaError(f"not a gold standard format: {spec.format}")


def _parse_pair_rows(stream, spec: ImportSpec, dataset: Dataset,
                     similarity: bool):
    if not (spec.id_column_a and spec.id_column_b):
        raise SchemaError("pair import needs two id columns")
    required = [spec.id_column_a, spec.id_column_b]
    if similarity and spec.similarity_column:
        required.append(spec.similarity_column)
    rows = _reader(stream, spec)
    header = _header(rows, required)
    a_pos = header.index(spec.id_column_a)
    b_pos = header.index(spec.id_column_b)
    sim_pos = (header.index(spec.similarity_column)
               if similarity and spec.similarity_column else None)
    for line, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise RowArityError(
                f"line {line}: expected {len(header)} fields, got {len(row)}")
        a = dataset.dense_id(row[a_pos])
        b = dataset.dense_id(row[b_pos])
        if a == b:
            raise SelfPairError(
                f"line {line}: record {row[a_pos]!r} paired with itself")
        sim = None
        if sim_pos is not None:
            raw = _null(row[sim_pos])
            if raw is not None:
                sim = float(raw)
                if not math.isfinite(sim):
                    raise ValueError(
                        f"line {line}: similarity must be finite, got {raw!r}")
        yield (min(a, b), max(a, b), sim)


def parse_experiment(stream, spec: ImportSpec, dataset: Dataset) -> list[MatchRecord]:
    """Canonicalized, deduplicated match records; collisions keep the
    maximum similarity, which is the monotone-safe choice for sweeps."""
    best: dict[tuple[int, int], Optional[float]] = {}
    for a, b, sim in _parse_pair_rows(stream, spec, dataset, similarity=True):
        key = (a, b)
        if key in best:
            old = best[key]
            if old is None or (sim is not None and sim > old):
                best[key] = sim
        else:
            best[key] = sim
    return [MatchRecord(a, b, sim, is_original=True)
            for (a, b), sim in sorted(best.items())]


def export_dataset(dataset: Dataset, spec: ImportSpec | None = None,
                   id_column: str = "id") -> str:
    """Writes the dataset back out; inverse of :func:`parse_dataset` up to
    quoting normalization."""
    spec = spec or ImportSpec(ImportFormat.DATASET_CSV)
    out = io.StringIO()
    writer = csv.writer(out, delimiter=spec.separator, quotechar=spec.quote,
                        escapechar=spec.escape, doublequote=spec.escape is None,
                        lineterminator="\n")
    writer.writerow([spec.id_column or id_column, *dataset.attribute_names])
    for native, row in zip(dataset.native_ids, dataset.records):
        writer.writerow([native, *["" if v is None else v for v in row]])
    return out.getvalue()
