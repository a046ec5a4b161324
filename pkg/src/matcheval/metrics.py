"""Quality metrics: pair-based scores from confusion matrices,
cluster-based partition comparisons, ground-truth-free estimators, and
dataset profiling.

Division by zero never silently becomes 0 here: a metric whose
denominator vanishes is *undefined* and carries ``value=None``.  Metrics
that read the true-negative cell are flagged, since the heavy class
imbalance of record pairs makes them unreliable for matching tasks.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Iterable, Optional, Sequence

from .clustering import Clustering, ConfusionMatrix
from .errors import EmptyClustering, FewerThanThreeExperiments, UnknownMetric

if TYPE_CHECKING:  # pragma: no cover
    from .model import Dataset, Experiment, GoldStandard


@dataclass(frozen=True)
class MetricValue:
    name: str
    value: Optional[float]
    defined_on: tuple[str, ...]
    reads_true_negatives: bool = False

    @property
    def defined(self) -> bool:
        return self.value is not None


# --- pair-based metrics -------------------------------------------------------

def _ratio(num: float, den: float) -> Optional[float]:
    return num / den if den > 0 else None


def _precision(m: ConfusionMatrix) -> Optional[float]:
    return _ratio(m.tp, m.tp + m.fp)


def _recall(m: ConfusionMatrix) -> Optional[float]:
    return _ratio(m.tp, m.tp + m.fn)


def _f1(m: ConfusionMatrix) -> Optional[float]:
    p, r = _precision(m), _recall(m)
    if p is None or r is None or p + r == 0:
        return None
    return 2 * p * r / (p + r)


def _f_star(m: ConfusionMatrix) -> Optional[float]:
    return _ratio(m.tp, m.tp + m.fp + m.fn)


def _accuracy(m: ConfusionMatrix) -> Optional[float]:
    return _ratio(m.tp + m.tn, m.total)


def _fowlkes_mallows(m: ConfusionMatrix) -> Optional[float]:
    p, r = _precision(m), _recall(m)
    if p is None or r is None:
        return None
    return math.sqrt(p * r)


def _mcc(m: ConfusionMatrix) -> Optional[float]:
    factors = ((m.tp + m.fp), (m.tp + m.fn), (m.tn + m.fp), (m.tn + m.fn))
    if any(f == 0 for f in factors):
        return None
    denominator = math.sqrt(math.prod(float(f) for f in factors))
    return (m.tp * m.tn - m.fp * m.fn) / denominator


def _reduction_ratio(m: ConfusionMatrix) -> Optional[float]:
    total = m.total
    return 1 - (m.tp + m.fp) / total if total > 0 else None


def _specificity(m: ConfusionMatrix) -> Optional[float]:
    return _ratio(m.tn, m.tn + m.fp)


@dataclass(frozen=True)
class _PairMetric:
    name: str
    fn: Callable[[ConfusionMatrix], Optional[float]]
    defined_on: tuple[str, ...]
    reads_tn: bool = False


PAIR_METRICS: dict[str, _PairMetric] = {m.name: m for m in (
    _PairMetric("precision", _precision, ("tp", "fp")),
    _PairMetric("recall", _recall, ("tp", "fn")),
    _PairMetric("f1", _f1, ("tp", "fp", "fn")),
    _PairMetric("f_star", _f_star, ("tp", "fp", "fn")),
    _PairMetric("accuracy", _accuracy, ("tp", "fp", "fn", "tn"), reads_tn=True),
    _PairMetric("fowlkes_mallows", _fowlkes_mallows, ("tp", "fp", "fn")),
    _PairMetric("mcc", _mcc, ("tp", "fp", "fn", "tn"), reads_tn=True),
    _PairMetric("reduction_ratio", _reduction_ratio,
                ("tp", "fp", "fn", "tn"), reads_tn=True),
    _PairMetric("specificity", _specificity, ("tn", "fp"), reads_tn=True),
)}


def pair_metric_names() -> list[str]:
    return list(PAIR_METRICS)


def pair_metric(name: str, matrix: ConfusionMatrix) -> MetricValue:
    try:
        metric = PAIR_METRICS[name]
    except KeyError:
        raise UnknownMetric(f"unknown pair metric {name!r}") from None
    return MetricValue(metric.name, metric.fn(matrix), metric.defined_on,
                       metric.reads_tn)


def pair_metrics(matrix: ConfusionMatrix) -> list[MetricValue]:
    """Every supported pair-based metric for one confusion matrix."""
    return [pair_metric(name, matrix) for name in PAIR_METRICS]


# --- cluster-based metrics ------------------------------------------------------

def _clusters_and_overlaps(exp: Clustering, truth: Clustering):
    exp_sizes: Counter = Counter()
    truth_sizes: Counter = Counter()
    overlap: Counter = Counter()
    for i in range(exp.n):
        e, t = exp.find(i), truth.find(i)
        exp_sizes[e] += 1
        truth_sizes[t] += 1
        overlap[(e, t)] += 1
    return exp_sizes, truth_sizes, overlap


def closest_cluster_scores(exp: Clustering,
                           truth: Clustering) -> tuple[float, float, float]:
    """(precision, recall, f1) where cluster similarity is the Jaccard
    coefficient of the clusters' record sets."""
    if exp.n == 0 or truth.n == 0:
        raise EmptyClustering("cluster metrics need at least one record")
    if exp.n != truth.n:
        raise ValueError("clusterings cover different record universes")
    exp_sizes, truth_sizes, overlap = _clusters_and_overlaps(exp, truth)
    best_exp: dict[int, float] = {}
    best_truth: dict[int, float] = {}
    for (e, t), shared in overlap.items():
        jaccard = shared / (exp_sizes[e] + truth_sizes[t] - shared)
        if jaccard > best_exp.get(e, 0.0):
            best_exp[e] = jaccard
        if jaccard > best_truth.get(t, 0.0):
            best_truth[t] = jaccard
    precision = sum(best_exp.values()) / len(exp_sizes)
    recall = sum(best_truth.values()) / len(truth_sizes)
    f1 = 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def closest_cluster_f1(exp: Clustering, truth: Clustering) -> MetricValue:
    _, _, f1 = closest_cluster_scores(exp, truth)
    return MetricValue("closest_cluster_f1", f1, ())


def variation_of_information(exp: Clustering, truth: Clustering) -> MetricValue:
    """VI = H(exp) + H(truth) - 2 I(exp, truth), natural logarithm."""
    if exp.n == 0 or exp.n != truth.n:
        raise ValueError("clusterings must cover the same non-empty universe")
    n = exp.n
    exp_sizes, truth_sizes, overlap = _clusters_and_overlaps(exp, truth)
    h_exp = -sum((c / n) * math.log(c / n) for c in exp_sizes.values())
    h_truth = -sum((c / n) * math.log(c / n) for c in truth_sizes.values())
    mutual = 0.0
    for (e, t), shared in overlap.items():
        joint = shared / n
        mutual += joint * math.log(joint * n * n / (exp_sizes[e] * truth_sizes[t]))
    vi = max(h_exp + h_truth - 2 * mutual, 0.0)
    return MetricValue("variation_of_information", vi, ())


CostFn = Callable[[int, int], float]


def unit_cost(x: int, y: int) -> float:
    return 1.0


def _slice_cost(source_clusters: list[list[int]], target_label: Sequence[int],
                merge_cost: CostFn, split_cost: CostFn) -> float:
    """Slice route: split every source cluster into its intersections
    with target clusters, then merge the intersections per target."""
    assembled: Counter = Counter()
    cost = 0.0
    for members in source_clusters:
        parts = Counter(target_label[r] for r in members)
        remaining = len(members)
        for target_cluster, count in parts.items():
            if remaining > count:
                cost += split_cost(count, remaining - count)
            remaining -= count
            already = assembled[target_cluster]
            if already > 0:
                cost += merge_cost(count, already)
            assembled[target_cluster] = already + count
    return cost


def _collapse_cost(source_sizes: list[int], target_sizes: list[int],
                   merge_cost: CostFn, split_cost: CostFn) -> float:
    """Collapse route: merge all source clusters of a connected component
    into one, then split the target clusters off one by one.  Where the
    operation order matters for the supplied costs, parts are accumulated
    and peeled in descending-size order."""
    cost = 0.0
    ordered = sorted(source_sizes, reverse=True)
    accumulated = ordered[0]
    for size in ordered[1:]:
        cost += merge_cost(size, accumulated)
        accumulated += size
    remaining = accumulated
    for size in sorted(target_sizes, reverse=True)[:-1]:
        cost += split_cost(size, remaining - size)
        remaining -= size
    return cost


def generalized_merge_distance(
    source: Clustering,
    target: Clustering,
    merge_cost: CostFn = unit_cost,
    split_cost: CostFn = unit_cost,
) -> MetricValue:
    """Cost of editing ``source`` into ``target`` with cluster merges and
    splits.  ``merge_cost(x, y)`` / ``split_cost(x, y)`` price one
    operation on parts of sizes x and y; both must be non-negative.

    Within each connected component of the cluster-intersection graph the
    cheaper of two canonical edit routes is charged: the slice route
    (split source clusters into their target intersections, merge the
    intersections per target) and the collapse route (merge the whole
    component, split the targets back off).  The slice route alone is not
    minimal for size-independent costs -- editing {{a,b},{c,d}} into
    {{a,c},{b,d}} costs 2 via collapse but 4 via slice -- and taking the
    better route per component restores the minimum there while keeping
    the computation linear.
    """
    if source.n != target.n:
        raise ValueError("clusterings cover different record universes")
    target_label = [target.find(i) for i in range(target.n)]
    source_members = source.members()

    # connected components over source/target cluster nodes
    component_of: dict = {}
    components: dict[int, tuple[list[list[int]], set[int]]] = {}
    counter = 0
    for root, members in source_members.items():
        labels = {target_label[r] for r in members}
        touched = {component_of[("t", t)] for t in labels
                   if ("t", t) in component_of}
        if touched:
            component = min(touched)
            for other in touched - {component}:
                clusters, targets = components.pop(other)
                components[component][0].extend(clusters)
                components[component][1].update(targets)
                for t in targets:
                    component_of[("t", t)] = component
        else:
            component = counter
            counter += 1
            components[component] = ([], set())
        components[component][0].append(members)
        components[component][1].update(labels)
        for t in labels:
            component_of[("t", t)] = component

    target_sizes = Counter(target_label)
    cost = 0.0
    for clusters, targets in components.values():
        slice_route = _slice_cost(clusters, target_label,
                                  merge_cost, split_cost)
        if len(clusters) == 1 and len(targets) == 1:
            cost += slice_route  # already identical; slice charges 0
            continue
        collapse_route = _collapse_cost(
            [len(c) for c in clusters], [target_sizes[t] for t in targets],
            merge_cost, split_cost)
        cost += min(slice_route, collapse_route)
    return MetricValue("generalized_merge_distance", cost, ())


# --- ground-truth-free estimators ------------------------------------------------

def majority_vote_deviation(pair_sets: Sequence[set],
                            names: Optional[Sequence[str]] = None) -> dict[str, int]:
    """Per-experiment count of disagreements with the majority vote.

    ``pair_sets`` are the (closure) pair sets of at least three
    experiments over one dataset.  Only pairs matched by at least one
    experiment are voted on; exact ties deviate for neither side.
    """
    if len(pair_sets) < 3:
        raise FewerThanThreeExperiments(
            f"majority voting needs >= 3 experiments, got {len(pair_sets)}")
    keys = list(names) if names is not None else [str(i) for i in range(len(pair_sets))]
    deviations = {k: 0 for k in keys}
    universe = set().union(*pair_sets)
    half = len(pair_sets) / 2
    for pair in universe:
        votes = sum(1 for s in pair_sets if pair in s)
        if votes == half:
            continue
        majority_match = votes > half
        for key, pairs in zip(keys, pair_sets):
            if (pair in pairs) != majority_match:
                deviations[key] += 1
    return deviations


# --- dataset profiling -----------------------------------------------------------

def tokenize(value: Optional[str]) -> list[str]:
    return value.split() if value else []


@dataclass
class DatasetProfile:
    name: str
    sparsity: float
    textuality: float
    tuple_count: int
    positive_ratio: Optional[float]
    vocabulary: frozenset[str] = field(repr=False, default=frozenset())


def profile_dataset(dataset: "Dataset",
                    truth: Optional["GoldStandard"] = None) -> DatasetProfile:
    """Sparsity, textuality, tuple count, vocabulary and, when a gold
    standard is given, the ratio of true duplicate pairs to all pairs."""
    cells = 0
    nulls = 0
    values = 0
    words = 0
    vocabulary: set[str] = set()
    for row in dataset.records:
        for value in row:
            cells += 1
            if value is None:
                nulls += 1
                continue
            values += 1
            tokens = tokenize(value)
            words += len(tokens)
            vocabulary.update(tokens)
    positive = None
    if truth is not None:
        total = dataset.total_pairs()
        positive = truth.clustering.total_pair_count / total if total else None
    return DatasetProfile(
        name=dataset.name,
        sparsity=nulls / cells if cells else 0.0,
        textuality=words / values if values else 0.0,
        tuple_count=dataset.record_count,
        positive_ratio=positive,
        vocabulary=frozenset(vocabulary),
    )


def vocabulary_similarity(first: Iterable[str], second: Iterable[str]) -> float:
    """Jaccard coefficient of two vocabularies; 0 when both are empty."""
    a, b = set(first), set(second)
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


PROFILE_DIMENSIONS = ("sparsity", "textuality", "tuple_count", "positive_ratio")


@dataclass(frozen=True)
class RankedCandidate:
    name: str
    score: float
    distances: dict[str, Optional[float]]


def rank_benchmark_datasets(
    candidates: Sequence[DatasetProfile],
    target: DatasetProfile,
    weights: Optional[dict[str, float]] = None,
) -> list[RankedCandidate]:
    """Candidates ordered by weighted, normalized distance to the target
    profile; vocabulary dissimilarity joins in under the ``vocabulary``
    weight.  Ties break deterministically by name.
    """
    if not candidates:
        raise ValueError("need at least one candidate profile")
    weights = weights or {dim: 1.0 for dim in PROFILE_DIMENSIONS + ("vocabulary",)}

    spans: dict[str, float] = {}
    for dim in PROFILE_DIMENSIONS:
        pool = [getattr(p, dim) for p in (*candidates, target)
                if getattr(p, dim) is not None]
        spans[dim] = (max(pool) - min(pool)) if pool else 0.0

    ranked = []
    for profile in candidates:
        score = 0.0
        distances: dict[str, Optional[float]] = {}
        for dim in PROFILE_DIMENSIONS:
            mine, theirs = getattr(profile, dim), getattr(target, dim)
            if mine is None or theirs is None:
                distances[dim] = None
                continue
            span = spans[dim]
            distance = abs(mine - theirs) / span if span > 0 else 0.0
            distances[dim] = distance
            score += weights.get(dim, 0.0) * distance
        dissimilarity = 1.0 - vocabulary_similarity(profile.vocabulary,
                                                    target.vocabulary)
        distances["vocabulary"] = dissimilarity
        score += weights.get("vocabulary", 0.0) * dissimilarity
        ranked.append(RankedCandidate(profile.name, score, distances))
    ranked.sort(key=lambda r: (r.score, r.name))
    return ranked
