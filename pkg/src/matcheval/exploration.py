"""Interactive exploration of matching results: set algebra over pair
sets, Venn regions, pair selection and sorting strategies, error
counterparts, attribute-level error ratios, and diagram data."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .clustering import ConfusionMatrix, Pair, confusion_matrix_sweep
from .errors import (
    EmptyInclude,
    MissingEffort,
    MixedDatasets,
    NoCandidates,
    NoGold,
    NoSimilarities,
    TooManySources,
)
from .metrics import pair_metric, tokenize
from .model import Dataset, Experiment, GoldStandard, MatchRecord

CLOSURE = "closure"
ORIGINAL_ONLY = "originalOnly"


# --- source references and set expressions -------------------------------------

@dataclass(frozen=True)
class SourceRef:
    """Pointer to a pair set: an experiment, a gold standard, or the
    universe of all record pairs of the dataset."""

    kind: str  # "experiment" | "gold" | "universe"
    id: Optional[str] = None

    @property
    def key(self) -> str:
        return self.kind if self.id is None else f"{self.kind}:{self.id}"

    @staticmethod
    def parse(text: str) -> "SourceRef":
        kind, _, entity_id = text.partition(":")
        if kind not in ("experiment", "gold", "universe"):
            raise ValueError(f"unknown source kind {kind!r}")
        return SourceRef(kind, entity_id or None)


@dataclass(frozen=True)
class SetExpression:
    include: tuple[SourceRef, ...]
    exclude: tuple[SourceRef, ...] = ()
    pair_mode: str = CLOSURE


@dataclass(frozen=True)
class PairView:
    """A record pair enriched with the full records and its context."""

    pair: Pair
    native_ids: tuple[str, str]
    records: tuple[tuple, tuple]
    similarity: Optional[float]
    labels: dict[str, bool] = field(default_factory=dict, hash=False)
    classification: Optional[str] = None


@dataclass
class ResolvedSource:
    ref: SourceRef
    pairs: frozenset[Pair]
    experiment: Optional[Experiment] = None
    gold: Optional[GoldStandard] = None


def resolve_sources(
    dataset: Dataset,
    refs: Sequence[SourceRef],
    experiments: dict[str, Experiment],
    golds: dict[str, GoldStandard],
    pair_mode: str = CLOSURE,
) -> list[ResolvedSource]:
    """Materialize the pair set behind every reference; all references
    must live on ``dataset``."""
    out = []
    for ref in refs:
        if ref.kind == "experiment":
            experiment = experiments[ref.id]
            if experiment.dataset_id != dataset.id:
                raise MixedDatasets(
                    f"experiment {experiment.name!r} belongs to another dataset")
            pairs = frozenset(experiment.pair_set(dataset.record_count, pair_mode))
            out.append(ResolvedSource(ref, pairs, experiment=experiment))
        elif ref.kind == "gold":
            gold = golds[ref.id]
            if gold.dataset_id != dataset.id:
                raise MixedDatasets(
                    f"gold standard {ref.id} belongs to another dataset")
            out.append(ResolvedSource(ref, frozenset(gold.pair_set()), gold=gold))
        elif ref.kind == "universe":
            pairs = frozenset(itertools.combinations(range(dataset.record_count), 2))
            out.append(ResolvedSource(ref, pairs))
        else:
            raise ValueError(f"unknown source kind {ref.kind!r}")
    return out


def _build_views(dataset: Dataset, pairs: Iterable[Pair],
                 sources: Sequence[ResolvedSource]) -> list[PairView]:
    experiment_sources = [s for s in sources if s.experiment is not None]
    gold_sources = [s for s in sources if s.gold is not None]
    gold_pairs = gold_sources[0].pairs if gold_sources else None
    experiment_union: set[Pair] = set()
    for source in experiment_sources:
        experiment_union |= source.pairs

    views = []
    for pair in sorted(pairs):
        a, b = pair
        similarity = None
        for source in experiment_sources:
            similarity = source.experiment.similarity_of(pair)
            if similarity is not None:
                break
        classification = None
        if gold_pairs is not None:
            in_gold = pair in gold_pairs
            in_exp = pair in experiment_union
            classification = ("TP" if in_exp and in_gold else
                              "FP" if in_exp else
                              "FN" if in_gold else "TN")
        views.append(PairView(
            pair=pair,
            native_ids=(dataset.native_ids[a], dataset.native_ids[b]),
            records=(tuple(dataset.records[a]), tuple(dataset.records[b])),
            similarity=similarity,
            labels={s.ref.key: pair in s.pairs for s in sources},
            classification=classification,
        ))
    return views


def evaluate_set_expression(
    dataset: Dataset,
    expression: SetExpression,
    experiments: dict[str, Experiment],
    golds: dict[str, GoldStandard],
) -> list[PairView]:
    """Pairs in every included source and in no excluded one, enriched
    with records, per-source labels and, when a gold standard takes part,
    the confusion-cell classification."""
    if not expression.include:
        raise EmptyInclude("a set expression needs at least one included source")
    included = resolve_sources(dataset, expression.include, experiments, golds,
                               expression.pair_mode)
    excluded = resolve_sources(dataset, expression.exclude, experiments, golds,
                               expression.pair_mode)
    result = set(included[0].pairs)
    for source in included[1:]:
        result &= source.pairs
    for source in excluded:
        result -= source.pairs
    return _build_views(dataset, result, [*included, *excluded])


@dataclass(frozen=True)
class VennRegion:
    members: tuple[int, ...]  # indices into the source list
    count: int
    expression: SetExpression


def venn_regions(
    dataset: Dataset,
    refs: Sequence[SourceRef],
    experiments: dict[str, Experiment],
    golds: dict[str, GoldStandard],
    pair_mode: str = CLOSURE,
) -> list[VennRegion]:
    """Exclusive pair counts for all 2^n - 1 membership signatures of 2-4
    sources; every region carries the set expression that reproduces it."""
    if len(refs) > 4:
        raise TooManySources(f"venn diagrams support at most 4 sources, got {len(refs)}")
    if len(refs) < 2:
        raise ValueError("venn diagrams need at least 2 sources")
    sources = resolve_sources(dataset, refs, experiments, golds, pair_mode)
    signature_counts: Counter = Counter()
    for pair in set().union(*(s.pairs for s in sources)):
        signature = tuple(i for i, s in enumerate(sources) if pair in s.pairs)
        signature_counts[signature] += 1

    regions = []
    indices = range(len(sources))
    for size in range(1, len(sources) + 1):
        for members in itertools.combinations(indices, size):
            expression = SetExpression(
                include=tuple(refs[i] for i in members),
                exclude=tuple(refs[i] for i in indices if i not in members),
                pair_mode=pair_mode,
            )
            regions.append(VennRegion(
                members=members,
                count=signature_counts.get(members, 0),
                expression=expression,
            ))
    return regions


# --- pair selection strategies ----------------------------------------------------

def _scored(experiment: Experiment) -> list[MatchRecord]:
    scored = experiment.scored_matches()
    if not scored:
        raise NoSimilarities(
            f"experiment {experiment.name!r} carries no similarity scores")
    return scored


def _threshold(experiment: Experiment, override: Optional[float]) -> float:
    return override if override is not None else experiment.decision_threshold()


def _selection_views(dataset: Dataset, experiment: Experiment,
                     matches: Sequence[MatchRecord], threshold: float,
                     gold: Optional[GoldStandard]) -> list[PairView]:
    gold_pairs = gold.pair_set() if gold is not None else None
    views = []
    for m in matches:
        a, b = m.pair
        classification = None
        if gold_pairs is not None:
            predicted = m.similarity is not None and m.similarity >= threshold
            actual = m.pair in gold_pairs
            classification = ("TP" if predicted and actual else
                              "FP" if predicted else
                              "FN" if actual else "TN")
        views.append(PairView(
            pair=m.pair,
            native_ids=(dataset.native_ids[a], dataset.native_ids[b]),
            records=(tuple(dataset.records[a]), tuple(dataset.records[b])),
            similarity=m.similarity,
            labels={f"experiment:{experiment.id}": True},
            classification=classification,
        ))
    return views


def select_around_threshold(
    dataset: Dataset,
    experiment: Experiment,
    k: int,
    threshold: Optional[float] = None,
    proportion: Optional[float] = None,
    gold: Optional[GoldStandard] = None,
) -> list[PairView]:
    """The ``k`` scored pairs closest to the decision threshold, split
    half/half above and below it or per the given proportion (share of
    pairs taken from above).  A short side is refilled from the other."""
    scored = _scored(experiment)
    t = _threshold(experiment, threshold)
    if k <= 0:
        return []
    above = sorted((m for m in scored if m.similarity >= t),
                   key=lambda m: (abs(m.similarity - t), m.pair))
    below = sorted((m for m in scored if m.similarity < t),
                   key=lambda m: (abs(m.similarity - t), m.pair))
    share = 0.5 if proportion is None else proportion
    want_above = min(int(k * share + 0.5), k)
    take_above = above[:want_above]
    take_below = below[:k - want_above]
    missing = k - len(take_above) - len(take_below)
    if missing > 0:
        if len(take_above) < want_above:
            take_below = below[:len(take_below) + missing]
        else:
            take_above = above[:len(take_above) + missing]
    chosen = sorted(take_above + take_below,
                    key=lambda m: (abs(m.similarity - t), m.pair))
    return _selection_views(dataset, experiment, chosen, t, gold)


def select_outliers(
    dataset: Dataset,
    experiment: Experiment,
    gold: Optional[GoldStandard],
    k: int,
    side: str = "both",
    threshold: Optional[float] = None,
) -> list[PairView]:
    """Misclassified scored pairs farthest from the threshold.

    A pair is predicted positive iff its similarity reaches the
    threshold; ``side`` restricts the result to false positives, false
    negatives or keeps both."""
    if gold is None:
        raise NoGold("outlier selection needs a gold standard")
    scored = _scored(experiment)
    t = _threshold(experiment, threshold)
    gold_pairs = gold.pair_set()
    false_positives = [m for m in scored
                       if m.similarity >= t and m.pair not in gold_pairs]
    false_negatives = [m for m in scored
                       if m.similarity < t and m.pair in gold_pairs]
    pool = {"falsePositives": false_positives,
            "falseNegatives": false_negatives,
            "both": false_positives + false_negatives}[side]
    pool.sort(key=lambda m: (-abs(m.similarity - t), m.pair))
    return _selection_views(dataset, experiment, pool[:k], t, gold)


@dataclass
class PartitionSummary:
    low: float
    high: float
    matrix: ConfusionMatrix
    representatives: list[PairView]
    size: int


def _allocate(counts: Sequence[int], budget: int) -> list[int]:
    """Largest-remainder allocation of ``budget`` proportional to counts,
    capped by each class size (shortfall flows to the other classes)."""
    total = sum(counts)
    if total == 0:
        return [0] * len(counts)
    budget = min(budget, total)
    raw = [budget * c / total for c in counts]
    out = [math.floor(r) for r in raw]
    remainders = sorted(range(len(counts)), key=lambda i: (raw[i] - out[i], -i),
                        reverse=True)
    leftover = budget - sum(out)
    for i in remainders:
        if leftover == 0:
            break
        out[i] += 1
        leftover -= 1
    # respect class sizes
    for i in range(len(out)):
        if out[i] > counts[i]:
            spill = out[i] - counts[i]
            out[i] = counts[i]
            for j in range(len(out)):
                if j != i:
                    room = counts[j] - out[j]
                    take = min(room, spill)
                    out[j] += take
                    spill -= take
    return out


def select_representatives(
    dataset: Dataset,
    experiment: Experiment,
    gold: Optional[GoldStandard],
    partitions: int,
    per_partition: int,
    sampler: str = "random",
    seed: int = 0,
    threshold: Optional[float] = None,
) -> list[PartitionSummary]:
    """Split the similarity-sorted result into ``partitions`` equal parts
    (remainder to the earliest) and reduce each to representative pairs.

    Samplers: ``random`` draws seeded uniform samples; ``classBased``
    weighs correctly vs incorrectly classified pairs by their share;
    ``quantile`` picks evenly spaced order statistics (a single
    representative is the median)."""
    if partitions < 1 or per_partition < 1:
        raise ValueError("partitions and per_partition must be >= 1")
    scored = _scored(experiment)
    t = _threshold(experiment, threshold)
    gold_pairs = gold.pair_set() if gold is not None else set()
    ordered = sorted(scored, key=lambda m: (-m.similarity, m.pair))

    base, remainder = divmod(len(ordered), partitions)
    rng = random.Random(seed)
    summaries = []
    start = 0
    for index in range(partitions):
        size = base + (1 if index < remainder else 0)
        chunk = ordered[start:start + size]
        start += size
        if not chunk:
            continue

        tp = fp = fn = tn = 0
        correct, incorrect = [], []
        for m in chunk:
            predicted = m.similarity >= t
            actual = m.pair in gold_pairs
            if predicted and actual:
                tp += 1
            elif predicted:
                fp += 1
            elif actual:
                fn += 1
            else:
                tn += 1
            (correct if predicted == actual else incorrect).append(m)

        budget = min(per_partition, len(chunk))
        if sampler == "random":
            chosen = rng.sample(chunk, budget)
        elif sampler == "classBased":
            allocation = _allocate([len(correct), len(incorrect)], budget)
            chosen = (rng.sample(correct, allocation[0])
                      + rng.sample(incorrect, allocation[1]))
        elif sampler == "quantile":
            if budget == 1:
                positions = [round(0.5 * (len(chunk) - 1))]
            else:
                positions = sorted({round(i * (len(chunk) - 1) / (budget - 1))
                                    for i in range(budget)})
            chosen = [chunk[p] for p in positions]
        else:
            raise ValueError(f"unknown sampler {sampler!r}")
        chosen.sort(key=lambda m: (-m.similarity, m.pair))

        summaries.append(PartitionSummary(
            low=chunk[-1].similarity,
            high=chunk[0].similarity,
            matrix=ConfusionMatrix(tp, fp, fn, tn),
            representatives=_selection_views(dataset, experiment, chosen, t, gold),
            size=len(chunk),
        ))
    return summaries


# --- sorting strategies -------------------------------------------------------------

class CellEntropies:
    """Per-cell token entropy of a dataset.

    A cell's entropy is the expected information content of its tokens
    measured against the token distribution of the whole column; rare
    tokens score high.  Null cells contribute zero."""

    def __init__(self, dataset: Dataset):
        columns = len(dataset.attribute_names)
        column_counts = [Counter() for _ in range(columns)]
        column_totals = [0] * columns
        for row in dataset.records:
            for j in range(columns):
                tokens = tokenize(row[j])
                column_counts[j].update(tokens)
                column_totals[j] += len(tokens)

        self.cells: list[list[float]] = []
        self.record_totals: list[float] = []
        for row in dataset.records:
            entropies = []
            for j in range(columns):
                tokens = tokenize(row[j])
                if not tokens:
                    entropies.append(0.0)
                    continue
                cell_counts = Counter(tokens)
                cell_total = len(tokens)
                entropy = sum(
                    (count / cell_total)
                    * -math.log(column_counts[j][token] / column_totals[j])
                    for token, count in cell_counts.items())
                entropies.append(entropy)
            self.cells.append(entropies)
            self.record_totals.append(sum(entropies))

    def cell(self, record: int, attribute: int) -> float:
        return self.cells[record][attribute]

    def record(self, record: int) -> float:
        return self.record_totals[record]

    def pair(self, a: int, b: int) -> float:
        return self.record_totals[a] + self.record_totals[b]


def column_entropy(dataset: Dataset) -> CellEntropies:
    return CellEntropies(dataset)


def sort_pairs(
    views: Sequence[PairView],
    key: str = "similarity",
    descending: bool = True,
    entropies: Optional[CellEntropies] = None,
    dataset: Optional[Dataset] = None,
) -> list[PairView]:
    """Stable, deterministic ordering by similarity or pair entropy; ties
    resolve by canonical pair order."""
    if key == "similarity":
        if any(v.similarity is None for v in views):
            raise NoSimilarities("not all pairs carry a similarity score")
        value = lambda v: v.similarity
    elif key == "entropy":
        if entropies is None:
            if dataset is None:
                raise ValueError("entropy sorting needs entropies or a dataset")
            entropies = CellEntropies(dataset)
        value = lambda v: entropies.pair(*v.pair)
    else:
        raise ValueError(f"unknown sort key {key!r}")
    sign = -1.0 if descending else 1.0
    return sorted(views, key=lambda v: (sign * value(v), v.pair))


# --- error analysis ------------------------------------------------------------------

def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(previous[j] + 1, current[j - 1] + 1,
                               previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def normalized_similarity(a: Optional[str], b: Optional[str]) -> float:
    a = a or ""
    b = b or ""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def default_record_similarity(dataset: Dataset) -> Callable[[int, int], float]:
    """Mean per-attribute normalized Levenshtein similarity."""
    def sim(r1: int, r2: int) -> float:
        row1, row2 = dataset.records[r1], dataset.records[r2]
        if not row1:
            return 1.0
        return sum(normalized_similarity(v1, v2)
                   for v1, v2 in zip(row1, row2)) / len(row1)
    return sim


def minkowski_norm(values: Sequence[float], q: float) -> float:
    return sum(abs(v) ** q for v in values) ** (1.0 / q)


def explain_error(
    pair: Pair,
    candidates: Sequence[Pair],
    sim: Callable[[int, int], float],
    q: float = 2.0,
) -> tuple[Pair, float]:
    """Best correctly-classified counterpart for a misclassified pair.

    Each candidate is scored by the larger Minkowski-q norm of the direct
    and the crossed record-similarity vectors; the candidate with the
    highest score wins, ties resolving to canonical pair order."""
    if not candidates:
        raise NoCandidates("no correctly classified pairs to compare against")
    if not 1.0 <= q <= 2.0:
        raise ValueError("q must lie in [1, 2]")
    f1, f2 = pair
    best = None
    best_score = None
    for candidate in sorted(candidates):
        t1, t2 = candidate
        direct = (sim(f1, t1), sim(f2, t2))
        cross = (sim(f1, t2), sim(f2, t1))
        score = max(minkowski_norm(direct, q), minkowski_norm(cross, q))
        if best_score is None or score > best_score:
            best, best_score = candidate, score
    return best, best_score


def correctly_classified_pairs(
    experiment: Experiment,
    gold: GoldStandard,
    threshold: Optional[float] = None,
    cap: int = 10000,
    entropies: Optional[CellEntropies] = None,
) -> list[Pair]:
    """Scored pairs whose predicted label matches the gold standard; a
    large set is capped to the highest-entropy pairs when entropies are
    available, else to the highest similarities."""
    scored = _scored(experiment)
    t = _threshold(experiment, threshold)
    gold_pairs = gold.pair_set()
    correct = [m for m in scored
               if (m.similarity >= t) == (m.pair in gold_pairs)]
    if len(correct) > cap:
        if entropies is not None:
            correct.sort(key=lambda m: (-entropies.pair(*m.pair), m.pair))
        else:
            correct.sort(key=lambda m: (-m.similarity, m.pair))
        correct = correct[:cap]
    return [m.pair for m in correct]


# --- attribute-level error ratios ------------------------------------------------------

@dataclass(frozen=True)
class AttributeRatio:
    attribute: str
    ratio: Optional[float]
    false_count: int
    total_count: int


def _pair_universe(dataset: Dataset, exp_pairs: set[Pair], gold_pairs: set[Pair],
                   universe: str) -> Iterable[Pair]:
    if universe == "full":
        return itertools.combinations(range(dataset.record_count), 2)
    if universe == "union":
        return exp_pairs | gold_pairs
    raise ValueError(f"unknown pair universe {universe!r}")


def null_ratio(
    dataset: Dataset,
    experiment: Experiment,
    gold: Optional[GoldStandard],
    universe: str = "union",
) -> list[AttributeRatio]:
    """Per attribute: misclassified share of the pairs with a null value.

    The pair universe defaults to experiment-closure union gold pairs;
    ``universe="full"`` evaluates all record pairs of the dataset, which
    is quadratic and only advisable for small datasets."""
    if gold is None:
        raise NoGold("null ratio needs a gold standard")
    exp_pairs = experiment.pair_set(dataset.record_count, CLOSURE)
    gold_pairs = gold.pair_set()
    columns = len(dataset.attribute_names)
    null_counts = [0] * columns
    false_counts = [0] * columns
    for a, b in _pair_universe(dataset, exp_pairs, gold_pairs, universe):
        misclassified = ((a, b) in exp_pairs) != ((a, b) in gold_pairs)
        row_a, row_b = dataset.records[a], dataset.records[b]
        for j in range(columns):
            if row_a[j] is None or row_b[j] is None:
                null_counts[j] += 1
                if misclassified:
                    false_counts[j] += 1
    return [AttributeRatio(
        attribute=dataset.attribute_names[j],
        ratio=(false_counts[j] / null_counts[j]) if null_counts[j] else None,
        false_count=false_counts[j],
        total_count=null_counts[j],
    ) for j in range(columns)]


def equal_ratio(
    dataset: Dataset,
    experiment: Experiment,
    gold: Optional[GoldStandard],
    universe: str = "union",
) -> list[AttributeRatio]:
    """Per attribute: misclassified share of the pairs with equal values.

    Equality is exact string equality; two nulls do not count as equal."""
    if gold is None:
        raise NoGold("equal ratio needs a gold standard")
    exp_pairs = experiment.pair_set(dataset.record_count, CLOSURE)
    gold_pairs = gold.pair_set()
    columns = len(dataset.attribute_names)
    equal_counts = [0] * columns
    false_counts = [0] * columns
    for a, b in _pair_universe(dataset, exp_pairs, gold_pairs, universe):
        misclassified = ((a, b) in exp_pairs) != ((a, b) in gold_pairs)
        row_a, row_b = dataset.records[a], dataset.records[b]
        for j in range(columns):
            if row_a[j] is not None and row_a[j] == row_b[j]:
                equal_counts[j] += 1
                if misclassified:
                    false_counts[j] += 1
    return [AttributeRatio(
        attribute=dataset.attribute_names[j],
        ratio=(false_counts[j] / equal_counts[j]) if equal_counts[j] else None,
        false_count=false_counts[j],
        total_count=equal_counts[j],
    ) for j in range(columns)]


# --- diagrams -----------------------------------------------------------------------

@dataclass(frozen=True)
class DiagramPoint:
    x: Optional[float]
    y: Optional[float]
    threshold: Optional[float]
    matrix: ConfusionMatrix


def metric_metric_diagram(
    dataset: Dataset,
    experiment: Experiment,
    gold: GoldStandard,
    x_metric: str,
    y_metric: str,
    s: int,
) -> list[DiagramPoint]:
    """One point per swept threshold; undefined metric values stay None
    so diagrams show gaps instead of fake zeros."""
    if not experiment.scored_matches():
        raise NoSimilarities(
            f"experiment {experiment.name!r} carries no similarity scores")
    matches = [(m.record_a, m.record_b, m.similarity) for m in experiment.matches]
    sweep = confusion_matrix_sweep(dataset.record_count, gold.clustering,
                                   matches, s)
    return [DiagramPoint(
        x=pair_metric(x_metric, matrix).value,
        y=pair_metric(y_metric, matrix).value,
        threshold=threshold,
        matrix=matrix,
    ) for matrix, threshold in sweep]


@dataclass(frozen=True)
class EffortPoint:
    effort_hours: float
    value: Optional[float]
    experiment_id: str
    experiment_name: str


@dataclass
class EffortSeries:
    solution_id: Optional[str]
    points: list[EffortPoint]


def effort_metric_diagram(
    dataset: Dataset,
    experiments: Sequence[Experiment],
    gold: GoldStandard,
    metric: str = "f1",
    running_max: bool = False,
) -> list[EffortSeries]:
    """Quality against invested setup effort, one series per solution;
    optionally transformed into the running maximum along the effort axis."""
    by_solution: dict[Optional[str], list[EffortPoint]] = {}
    for experiment in experiments:
        kpis = experiment.soft_kpis
        if kpis is None or kpis.setup_effort is None:
            raise MissingEffort(
                f"experiment {experiment.name!r} has no setup effort")
        matches = [(m.record_a, m.record_b, m.similarity)
                   for m in experiment.matches]
        matrix = confusion_matrix_sweep(dataset.record_count, gold.clustering,
                                        matches, 2)[-1][0]
        point = EffortPoint(
            effort_hours=kpis.setup_effort.hr_amount,
            value=pair_metric(metric, matrix).value,
            experiment_id=experiment.id,
            experiment_name=experiment.name,
        )
        by_solution.setdefault(experiment.solution_id, []).append(point)

    series = []
    for solution_id in sorted(by_solution, key=lambda s: (s is None, s)):
        points = sorted(by_solution[solution_id],
                        key=lambda p: (p.effort_hours, p.experiment_id))
        if running_max:
            best = None
            transformed = []
            for p in points:
                if p.value is not None and (best is None or p.value > best):
                    best = p.value
                transformed.append(EffortPoint(p.effort_hours, best,
                                               p.experiment_id, p.experiment_name))
            points = transformed
        series.append(EffortSeries(solution_id=solution_id, points=points))
    return series
