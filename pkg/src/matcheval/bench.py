"""Synthetic instances and the timing harness comparing the optimized
threshold sweep against the naive per-sample recomputation."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .clustering import (
    Clustering,
    ScoredPair,
    confusion_matrix_sequence,
    naive_confusion_sequence,
)


def synthetic_instance(
    records: int,
    matches: int,
    seed: int = 0,
    noise_share: float = 0.3,
) -> tuple[Clustering, list[ScoredPair]]:
    """A gold clustering plus a scored match list that mixes true pairs
    (higher similarities) with cross-cluster noise (lower, overlapping)."""
    rng = random.Random(seed)
    labels = []
    cluster = 0
    filled = 0
    while filled < records:
        size = min(rng.choice((1, 1, 2, 2, 3, 4)), records - filled)
        labels.extend([cluster] * size)
        filled += size
        cluster += 1
    truth = Clustering.from_labels(labels)

    members: dict[int, list[int]] = {}
    for record, label in enumerate(labels):
        members.setdefault(label, []).append(record)
    true_candidates = []
    for group in members.values():
        for a, b in zip(group, group[1:]):
            true_candidates.append((a, b))
        if len(group) > 2:
            true_candidates.append((group[0], group[-1]))
    rng.shuffle(true_candidates)

    chosen: dict[tuple[int, int], float] = {}
    want_true = min(len(true_candidates), int(matches * (1 - noise_share)))
    for a, b in true_candidates[:want_true]:
        chosen[(a, b)] = rng.uniform(0.5, 1.0)
    attempts = 0
    while len(chosen) < matches and attempts < matches * 20:
        attempts += 1
        a, b = rng.randrange(records), rng.randrange(records)
        if a == b:
            continue
        pair = (min(a, b), max(a, b))
        if pair in chosen:
            continue
        chosen[pair] = rng.uniform(0.0, 0.8)
    return truth, [(a, b, sim) for (a, b), sim in chosen.items()]


@dataclass(frozen=True)
class BenchResult:
    algorithm: str
    records: int
    matches: int
    samples: int
    seconds: float


def run_bench(
    records: int,
    matches: int,
    samples: int,
    seed: int = 0,
    algorithms: tuple[str, ...] = ("optimized", "naive"),
) -> list[BenchResult]:
    """Times the requested algorithms on one shared synthetic instance
    and verifies they agree when both run."""
    truth, scored = synthetic_instance(records, matches, seed)
    outputs = {}
    results = []
    for algorithm in algorithms:
        fn = (confusion_matrix_sequence if algorithm == "optimized"
              else naive_confusion_sequence)
        started = time.perf_counter()
        outputs[algorithm] = fn(records, truth, scored, samples)
        results.append(BenchResult(
            algorithm=algorithm, records=records, matches=len(scored),
            samples=samples, seconds=time.perf_counter() - started))
    if len(outputs) == 2:
        first, second = outputs.values()
        if first != second:
            raise AssertionError("optimized and naive sweeps disagree")
    return results
