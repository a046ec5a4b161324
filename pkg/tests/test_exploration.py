import itertools
import math
import random

import pytest

from matcheval.clustering import Clustering
from matcheval.errors import (
    EmptyInclude,
    MissingEffort,
    MixedDatasets,
    NoCandidates,
    NoGold,
    NoSimilarities,
    TooManySources,
)
from matcheval.exploration import (
    CellEntropies,
    SetExpression,
    SourceRef,
    column_entropy,
    correctly_classified_pairs,
    default_record_similarity,
    effort_metric_diagram,
    equal_ratio,
    evaluate_set_expression,
    explain_error,
    levenshtein,
    metric_metric_diagram,
    null_ratio,
    select_around_threshold,
    select_outliers,
    select_representatives,
    sort_pairs,
    venn_regions,
)
from matcheval.model import Dataset, Experiment, GoldStandard, MatchRecord
from matcheval.softkpi import EffortEntry, ExperimentKpis

from .oracles import explain_error_oracle


def make_dataset(n=4, records=None, attributes=None):
    names = "abcdefghij"
    records = records if records is not None else [["v"] for _ in range(n)]
    attributes = attributes or [f"a{i}" for i in range(len(records[0]) if records else 0)]
    return Dataset(id="ds", name="ds", attribute_names=attributes,
                   native_ids=[names[i] for i in range(n)], records=records)


def make_experiment(matches, exp_id="e1", dataset_id="ds", **kwargs):
    records = [MatchRecord(min(a, b), max(a, b), sim) for a, b, sim in matches]
    return Experiment(id=exp_id, name=exp_id, dataset_id=dataset_id,
                      matches=records, **kwargs)


def make_gold(n, pairs, gold_id="g1", dataset_id="ds"):
    return GoldStandard(id=gold_id, dataset_id=dataset_id,
                        clustering=Clustering.from_pairs(n, pairs))


A, B, C, D = 0, 1, 2, 3


@pytest.fixture
def worked():
    dataset = make_dataset(4)
    gold = make_gold(4, [(A, B), (C, D)])
    experiment = make_experiment([(A, C, 0.9), (B, D, 0.8), (A, B, 0.7)])
    return dataset, gold, experiment


# --- set expressions ------------------------------------------------------------

def refs(*texts):
    return tuple(SourceRef.parse(t) for t in texts)


def test_missed_by_every_experiment(worked):
    dataset, gold, _ = worked
    e1 = make_experiment([(A, B, 0.9)], exp_id="e1")
    e2 = make_experiment([(A, B, 0.8), (A, C, 0.5)], exp_id="e2")
    expr = SetExpression(include=refs("gold:g1"),
                         exclude=refs("experiment:e1", "experiment:e2"))
    views = evaluate_set_expression(dataset, expr, {"e1": e1, "e2": e2},
                                    {"g1": gold})
    assert [v.pair for v in views] == [(C, D)]
    assert views[0].classification == "FN"


def test_self_difference_is_empty(worked):
    dataset, gold, experiment = worked
    expr = SetExpression(include=refs("experiment:e1"),
                         exclude=refs("experiment:e1"))
    assert evaluate_set_expression(dataset, expr, {"e1": experiment},
                                   {"g1": gold}) == []


def test_intersection_with_gold_is_tp_set(worked):
    dataset, gold, _ = worked
    e1 = make_experiment([(A, B, 0.9), (C, D, 0.8)], exp_id="e1")
    expr = SetExpression(include=refs("experiment:e1", "gold:g1"))
    views = evaluate_set_expression(dataset, expr, {"e1": e1}, {"g1": gold})
    assert [v.pair for v in views] == [(A, B), (C, D)]
    assert all(v.classification == "TP" for v in views)


def test_original_only_mode_hides_closure_pairs(worked):
    dataset, gold, _ = worked
    chain = make_experiment([(A, B, 0.9), (B, C, 0.8)], exp_id="e1")
    closure = SetExpression(include=refs("experiment:e1"))
    originals = SetExpression(include=refs("experiment:e1"),
                              pair_mode="originalOnly")
    with_closure = evaluate_set_expression(dataset, closure, {"e1": chain}, {})
    only_original = evaluate_set_expression(dataset, originals, {"e1": chain}, {})
    assert {v.pair for v in with_closure} == {(A, B), (A, C), (B, C)}
    assert {v.pair for v in only_original} == {(A, B), (B, C)}


def test_empty_include_raises(worked):
    dataset, gold, experiment = worked
    with pytest.raises(EmptyInclude):
        evaluate_set_expression(dataset, SetExpression(include=()),
                                {"e1": experiment}, {"g1": gold})


def test_mixed_datasets_rejected(worked):
    dataset, gold, _ = worked
    alien = make_experiment([(A, B, 0.5)], exp_id="e9", dataset_id="other")
    expr = SetExpression(include=refs("experiment:e9"))
    with pytest.raises(MixedDatasets):
        evaluate_set_expression(dataset, expr, {"e9": alien}, {})


def test_view_enrichment_carries_records_and_similarity(worked):
    dataset, gold, experiment = worked
    expr = SetExpression(include=refs("experiment:e1"), pair_mode="originalOnly")
    views = evaluate_set_expression(dataset, expr, {"e1": experiment},
                                    {"g1": gold})
    by_pair = {v.pair: v for v in views}
    assert by_pair[(A, C)].similarity == 0.9
    assert by_pair[(A, C)].native_ids == ("a", "c")
    assert by_pair[(A, C)].records == (("v",), ("v",))


def random_universe(rng, n):
    all_pairs = list(itertools.combinations(range(n), 2))
    experiments = {}
    for i in range(rng.randrange(1, 4)):
        picked = {p for p in all_pairs if rng.random() < 0.3}
        experiments[f"e{i}"] = make_experiment(
            [(a, b, round(rng.random(), 2)) for a, b in picked], exp_id=f"e{i}")
    gold_pairs = [p for p in all_pairs if rng.random() < 0.3]
    return experiments, make_gold(n, gold_pairs)


def test_set_expressions_match_brute_force_enumeration():
    rng = random.Random(71)
    for _ in range(40):
        n = rng.randrange(2, 11)
        dataset = make_dataset(n)
        experiments, gold = random_universe(rng, n)
        keys = [f"experiment:{k}" for k in experiments] + ["gold:g1"]
        include = rng.sample(keys, rng.randrange(1, len(keys) + 1))
        exclude = rng.sample(keys, rng.randrange(0, len(keys)))
        expr = SetExpression(include=refs(*include), exclude=refs(*exclude))
        views = evaluate_set_expression(dataset, expr, experiments, {"g1": gold})

        def pairs_of(key):
            kind, _, eid = key.partition(":")
            if kind == "gold":
                return gold.pair_set()
            return experiments[eid].pair_set(n, "closure")

        expected = set.intersection(*[set(pairs_of(k)) for k in include])
        for k in exclude:
            expected -= pairs_of(k)
        assert {v.pair for v in views} == expected


# --- venn regions ---------------------------------------------------------------

def test_venn_two_identical_experiments(worked):
    dataset, gold, _ = worked
    e1 = make_experiment([(A, B, 0.9)], exp_id="e1")
    e2 = make_experiment([(A, B, 0.5)], exp_id="e2")
    regions = venn_regions(dataset, refs("experiment:e1", "experiment:e2"),
                           {"e1": e1, "e2": e2}, {})
    counts = {r.members: r.count for r in regions}
    assert counts == {(0,): 0, (1,): 0, (0, 1): 1}


def test_venn_worked_example_step1(worked):
    dataset, gold, _ = worked
    e1 = make_experiment([(A, C, 0.9)], exp_id="e1")
    regions = venn_regions(dataset, refs("experiment:e1", "gold:g1"),
                           {"e1": e1}, {"g1": gold})
    counts = {r.members: r.count for r in regions}
    assert counts == {(0,): 1, (1,): 2, (0, 1): 0}


def test_venn_region_expressions_reproduce_counts(worked):
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randrange(2, 9)
        dataset = make_dataset(n)
        experiments, gold = random_universe(rng, n)
        sources = [f"experiment:{k}" for k in experiments][:3] + ["gold:g1"]
        sources = sources[:rng.randrange(2, min(4, len(sources)) + 1)]
        regions = venn_regions(dataset, refs(*sources), experiments, {"g1": gold})
        union = set()
        for key in sources:
            kind, _, eid = key.partition(":")
            union |= (gold.pair_set() if kind == "gold"
                      else experiments[eid].pair_set(n, "closure"))
        assert sum(r.count for r in regions) == len(union)
        for region in regions:
            views = evaluate_set_expression(dataset, region.expression,
                                            experiments, {"g1": gold})
            assert len(views) == region.count


def test_venn_source_count_limits(worked):
    dataset, gold, experiment = worked
    experiments = {"e1": experiment}
    with pytest.raises(TooManySources):
        venn_regions(dataset, refs(*["experiment:e1"] * 5), experiments, {})
    with pytest.raises(ValueError):
        venn_regions(dataset, refs("experiment:e1"), experiments, {})


def test_confusion_cells_as_set_expressions(worked):
    dataset, gold, experiment = worked
    from matcheval.clustering import confusion_matrix_sequence
    matches = [(m.record_a, m.record_b, m.similarity)
               for m in experiment.matches]
    matrix = confusion_matrix_sequence(4, gold.clustering, matches, 2)[-1]
    experiments = {"e1": experiment}
    golds = {"g1": gold}

    def count(include, exclude=()):
        expr = SetExpression(include=refs(*include), exclude=refs(*exclude))
        return len(evaluate_set_expression(dataset, expr, experiments, golds))

    assert count(["experiment:e1", "gold:g1"]) == matrix.tp
    assert count(["experiment:e1"], ["gold:g1"]) == matrix.fp
    assert count(["gold:g1"], ["experiment:e1"]) == matrix.fn
    assert count(["universe"], ["experiment:e1", "gold:g1"]) == matrix.tn


# --- selection strategies ----------------------------------------------------------

def test_select_around_threshold_zero_k(worked):
    dataset, gold, experiment = worked
    assert select_around_threshold(dataset, experiment, 0, threshold=0.5) == []


def test_select_around_threshold_takes_all_when_k_large(worked):
    dataset, gold, experiment = worked
    views = select_around_threshold(dataset, experiment, 10, threshold=0.5)
    assert len(views) == 3


def test_select_around_threshold_nearest():
    dataset = make_dataset(5)
    experiment = make_experiment(
        [(0, 1, 0.1), (0, 2, 0.4), (0, 3, 0.6), (0, 4, 0.9)])
    views = select_around_threshold(dataset, experiment, 2, threshold=0.5)
    assert sorted(v.similarity for v in views) == [0.4, 0.6]


def test_select_around_threshold_proportion():
    dataset = make_dataset(5)
    experiment = make_experiment(
        [(0, 1, 0.1), (0, 2, 0.4), (0, 3, 0.6), (0, 4, 0.9)])
    views = select_around_threshold(dataset, experiment, 2, threshold=0.5,
                                    proportion=1.0)
    assert sorted(v.similarity for v in views) == [0.6, 0.9]


def test_select_around_threshold_requires_similarities():
    dataset = make_dataset(3)
    experiment = make_experiment([(0, 1, None)])
    with pytest.raises(NoSimilarities):
        select_around_threshold(dataset, experiment, 2, threshold=0.5)


def test_select_outliers_perfect_experiment_is_empty(worked):
    dataset, _, _ = worked
    gold = make_gold(4, [(A, B), (C, D)])
    experiment = make_experiment([(A, B, 0.9), (C, D, 0.8)])
    assert select_outliers(dataset, experiment, gold, 5) == []


def test_select_outliers_extreme_false_positive_first():
    dataset = make_dataset(4)
    gold = make_gold(4, [(A, B)])
    experiment = make_experiment([(A, B, 0.6), (A, C, 0.99), (B, C, 0.55)])
    views = select_outliers(dataset, experiment, gold, 2, threshold=0.5)
    assert views[0].pair == (A, C)
    assert views[0].classification == "FP"


def test_select_outliers_matches_brute_force_sort():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randrange(3, 9)
        dataset = make_dataset(n)
        experiments, gold = random_universe(rng, n)
        experiment = next(iter(experiments.values()))
        if not experiment.scored_matches():
            continue
        t = 0.5
        views = select_outliers(dataset, experiment, gold, 4, threshold=t)
        gold_pairs = gold.pair_set()
        expected = [m for m in experiment.scored_matches()
                    if (m.similarity >= t) != (m.pair in gold_pairs)]
        expected.sort(key=lambda m: (-abs(m.similarity - t), m.pair))
        assert [v.pair for v in views] == [m.pair for m in expected[:4]]


def test_select_outliers_requires_gold(worked):
    dataset, _, experiment = worked
    with pytest.raises(NoGold):
        select_outliers(dataset, experiment, None, 3)


def test_representatives_whole_partition_when_b_large(worked):
    dataset, gold, experiment = worked
    summaries = select_representatives(dataset, experiment, gold,
                                       partitions=1, per_partition=50)
    assert len(summaries) == 1
    assert len(summaries[0].representatives) == 3
    assert summaries[0].high == 0.9
    assert summaries[0].low == 0.7


def test_representatives_quantile_single_is_median():
    dataset = make_dataset(6)
    experiment = make_experiment(
        [(0, 1, 0.9), (0, 2, 0.8), (0, 3, 0.7), (0, 4, 0.6), (0, 5, 0.5)])
    summaries = select_representatives(dataset, experiment, None,
                                       partitions=1, per_partition=1,
                                       sampler="quantile", threshold=0.5)
    assert [v.similarity for v in summaries[0].representatives] == [0.7]


def test_representatives_class_based_allocation():
    dataset = make_dataset(6)
    gold = make_gold(6, [(0, 1), (0, 2), (1, 2), (0, 3)])
    # at threshold 0.5: correct = (0,1),(0,2),(0,3); incorrect = (4,5) FP
    experiment = make_experiment(
        [(0, 1, 0.9), (0, 2, 0.8), (0, 3, 0.7), (4, 5, 0.6)])
    summaries = select_representatives(dataset, experiment, gold,
                                       partitions=1, per_partition=4,
                                       sampler="classBased", threshold=0.5)
    reps = summaries[0].representatives
    assert len(reps) == 4
    assert sum(1 for v in reps if v.classification in ("TP", "TN")) == 3
    assert sum(1 for v in reps if v.classification in ("FP", "FN")) == 1


def test_representatives_partitions_tile_the_result():
    rng = random.Random(15)
    dataset = make_dataset(10)
    matches = [(a, b, round(rng.random(), 3))
               for a, b in itertools.combinations(range(10), 2)]
    experiment = make_experiment(matches)
    summaries = select_representatives(dataset, experiment, None,
                                       partitions=4, per_partition=2,
                                       threshold=0.5, seed=1)
    assert sum(s.size for s in summaries) == len(matches)
    assert all(s.matrix.total == s.size for s in summaries)
    # ranges are ordered and non-overlapping
    for earlier, later in zip(summaries, summaries[1:]):
        assert earlier.low >= later.high


def test_representatives_random_sampler_is_seeded(worked):
    dataset, gold, experiment = worked
    first = select_representatives(dataset, experiment, gold, 2, 1, seed=42)
    second = select_representatives(dataset, experiment, gold, 2, 1, seed=42)
    assert [[v.pair for v in s.representatives] for s in first] == \
        [[v.pair for v in s.representatives] for s in second]


# --- entropy and sorting ---------------------------------------------------------

def test_cell_entropy_derived_example():
    dataset = make_dataset(2, records=[["a b"], ["a"]])
    entropies = column_entropy(dataset)
    expected = 0.5 * -math.log(2 / 3) + 0.5 * -math.log(1 / 3)
    assert entropies.cell(0, 0) == pytest.approx(expected, abs=1e-4)
    assert entropies.cell(0, 0) == pytest.approx(0.7520, abs=1e-4)


def test_cell_entropy_single_token_column_is_zero():
    dataset = make_dataset(3, records=[["x"], ["x"], ["x"]])
    entropies = column_entropy(dataset)
    assert all(entropies.cell(i, 0) == 0.0 for i in range(3))


def test_cell_entropy_null_is_zero():
    dataset = make_dataset(2, records=[[None], ["a"]])
    assert column_entropy(dataset).cell(0, 0) == 0.0


def test_sort_pairs_by_similarity(worked):
    dataset, gold, experiment = worked
    expr = SetExpression(include=refs("experiment:e1"), pair_mode="originalOnly")
    views = evaluate_set_expression(dataset, expr, {"e1": experiment}, {})
    ordered = sort_pairs(views, key="similarity", descending=True)
    assert [v.similarity for v in ordered] == [0.9, 0.8, 0.7]
    assert sort_pairs(ordered, key="similarity", descending=True) == ordered
    reverse = sort_pairs(views, key="similarity", descending=False)
    assert [v.similarity for v in reverse] == [0.7, 0.8, 0.9]


def test_sort_pairs_by_entropy_agrees_with_column_entropy():
    records = [["rare token"], ["common"], ["common"], ["common"]]
    dataset = make_dataset(4, records=records)
    experiment = make_experiment([(0, 1, 0.5), (2, 3, 0.5)])
    expr = SetExpression(include=refs("experiment:e1"))
    views = evaluate_set_expression(dataset, expr, {"e1": experiment}, {})
    entropies = column_entropy(dataset)
    ordered = sort_pairs(views, key="entropy", entropies=entropies)
    values = [entropies.pair(*v.pair) for v in ordered]
    assert values == sorted(values, reverse=True)
    assert ordered[0].pair == (0, 1)


def test_sort_pairs_without_similarity_raises():
    dataset = make_dataset(3)
    experiment = make_experiment([(0, 1, None), (1, 2, 0.5)])
    expr = SetExpression(include=refs("experiment:e1"), pair_mode="originalOnly")
    views = evaluate_set_expression(dataset, expr, {"e1": experiment}, {})
    with pytest.raises(NoSimilarities):
        sort_pairs(views, key="similarity")


# --- error analysis -----------------------------------------------------------------

def test_levenshtein_basics():
    assert levenshtein("", "") == 0
    assert levenshtein("abc", "abc") == 0
    assert levenshtein("kitten", "sitting") == 3


def test_explain_error_perfect_candidate_scores_sqrt2():
    sim = lambda a, b: 1.0
    best, score = explain_error((0, 1), [(2, 3)], sim, q=2.0)
    assert best == (2, 3)
    assert score == pytest.approx(math.sqrt(2))


def test_explain_error_zero_similarity_scores_zero():
    sim = lambda a, b: 0.0
    _, score = explain_error((0, 1), [(2, 3)], sim, q=2.0)
    assert score == 0.0


def test_explain_error_manhattan_example():
    table = {(0, 2): 0.8, (1, 3): 0.2, (0, 3): 0.5, (1, 2): 0.6}
    sim = lambda a, b: table.get((a, b), table.get((b, a), 0.0))
    _, score = explain_error((0, 1), [(2, 3)], sim, q=1.0)
    assert score == pytest.approx(1.1)  # max(|0.8|+|0.2|, |0.5|+|0.6|)


def test_explain_error_no_candidates():
    with pytest.raises(NoCandidates):
        explain_error((0, 1), [], lambda a, b: 1.0)


def test_explain_error_matches_brute_force_argmax():
    rng = random.Random(77)
    for q in (1.0, 2.0, 1.5):
        for _ in range(25):
            n = 12
            table = {}
            def sim(a, b):
                key = (min(a, b), max(a, b))
                if key not in table:
                    table[key] = round(random.Random(hash(key) % 1000).random(), 3)
                return table[key]
            candidates = [
                (a, b) for a, b in itertools.combinations(range(2, n), 2)
                if rng.random() < 0.4]
            if not candidates:
                continue
            got_pair, got_score = explain_error((0, 1), candidates, sim, q)
            want_pair, want_score = explain_error_oracle((0, 1), candidates, sim, q)
            assert got_pair == want_pair
            assert got_score == pytest.approx(want_score)


def test_explain_error_invariant_under_monotone_rescaling():
    rng = random.Random(5)
    values = {}
    def sim(a, b):
        key = (min(a, b), max(a, b))
        values.setdefault(key, rng.random())
        return values[key]
    candidates = [(2, 3), (4, 5), (6, 7), (2, 5)]
    best, _ = explain_error((0, 1), candidates, sim, q=2.0)
    scaled, _ = explain_error((0, 1), candidates,
                              lambda a, b: sim(a, b) * 0.25, q=2.0)
    assert best == scaled


def test_default_record_similarity_and_candidates(worked):
    records = [["alice", "berlin"], ["alicia", "berlin"],
               ["bob", "potsdam"], ["bobby", "potsdam"]]
    dataset = make_dataset(4, records=records)
    sim = default_record_similarity(dataset)
    assert sim(0, 0) == pytest.approx(1.0)
    assert 0 < sim(0, 1) < 1
    gold = make_gold(4, [(A, B), (C, D)])
    experiment = make_experiment([(A, B, 0.9), (C, D, 0.8), (A, C, 0.3)])
    pairs = correctly_classified_pairs(experiment, gold, threshold=0.5)
    assert set(pairs) == {(A, B), (C, D), (A, C)}  # (a,c) is a true negative


# --- attribute ratios -----------------------------------------------------------

def ratio_fixture():
    records = [
        ["x", None], ["x", None], ["y", "1"],
        ["y", "1"], [None, "2"], ["z", "2"],
    ]
    dataset = make_dataset(6, records=records, attributes=["name", "code"])
    gold = make_gold(6, [(0, 1), (2, 3)])
    experiment = make_experiment([(0, 1, 0.9), (2, 3, 0.8), (4, 5, 0.7)])
    return dataset, gold, experiment


def brute_force_ratios(dataset, experiment, gold, predicate, universe):
    exp_pairs = experiment.pair_set(dataset.record_count, "closure")
    gold_pairs = gold.pair_set()
    if universe == "full":
        pairs = itertools.combinations(range(dataset.record_count), 2)
    else:
        pairs = exp_pairs | gold_pairs
    totals = [0] * len(dataset.attribute_names)
    falses = [0] * len(dataset.attribute_names)
    for a, b in pairs:
        wrong = ((a, b) in exp_pairs) != ((a, b) in gold_pairs)
        for j in range(len(dataset.attribute_names)):
            if predicate(dataset.records[a][j], dataset.records[b][j]):
                totals[j] += 1
                if wrong:
                    falses[j] += 1
    return [(f / t if t else None) for f, t in zip(falses, totals)]


@pytest.mark.parametrize("universe", ["union", "full"])
def test_null_ratio_matches_enumeration(universe):
    dataset, gold, experiment = ratio_fixture()
    got = null_ratio(dataset, experiment, gold, universe=universe)
    want = brute_force_ratios(
        dataset, experiment, gold,
        lambda va, vb: va is None or vb is None, universe)
    assert [r.ratio for r in got] == want


@pytest.mark.parametrize("universe", ["union", "full"])
def test_equal_ratio_matches_enumeration(universe):
    dataset, gold, experiment = ratio_fixture()
    got = equal_ratio(dataset, experiment, gold, universe=universe)
    want = brute_force_ratios(
        dataset, experiment, gold,
        lambda va, vb: va is not None and va == vb, universe)
    assert [r.ratio for r in got] == want


def test_null_ratio_never_null_attribute_is_undefined():
    records = [["x", "p"], ["x", "q"], ["y", "r"]]
    dataset = make_dataset(3, records=records, attributes=["full", "other"])
    gold = make_gold(3, [(0, 1)])
    experiment = make_experiment([(0, 1, 0.9)])
    ratios = null_ratio(dataset, experiment, gold)
    assert all(r.ratio is None for r in ratios)


def test_equal_ratio_all_distinct_is_undefined():
    records = [["p"], ["q"], ["r"]]
    dataset = make_dataset(3, records=records)
    gold = make_gold(3, [(0, 1)])
    experiment = make_experiment([(0, 1, 0.9)])
    assert equal_ratio(dataset, experiment, gold)[0].ratio is None


def test_perfect_experiment_has_zero_ratios():
    records = [["x", None], ["x", None], ["y", "1"], ["y", "1"]]
    dataset = make_dataset(4, records=records, attributes=["name", "code"])
    gold = make_gold(4, [(0, 1), (2, 3)])
    experiment = make_experiment([(0, 1, 0.9), (2, 3, 0.8)])
    for r in null_ratio(dataset, experiment, gold, universe="full"):
        assert r.ratio in (0.0, None)
    for r in equal_ratio(dataset, experiment, gold, universe="full"):
        assert r.ratio in (0.0, None)


def test_ratio_requires_gold():
    dataset, _, experiment = ratio_fixture()
    with pytest.raises(NoGold):
        null_ratio(dataset, experiment, None)
    with pytest.raises(NoGold):
        equal_ratio(dataset, experiment, None)


# --- diagrams --------------------------------------------------------------------

def test_metric_metric_diagram_worked_example(worked):
    dataset, gold, experiment = worked
    points = metric_metric_diagram(dataset, experiment, gold,
                                   "precision", "recall", 4)
    assert [(p.x, p.y) for p in points] == [
        (None, 0.0), (0.0, 0.0), (0.0, 0.0), (pytest.approx(1 / 3), 1.0)]
    assert [p.threshold for p in points] == [None, 0.9, 0.8, 0.7]
    assert points[3].matrix.as_tuple() == (2, 4, 0, 0)


def test_metric_metric_diagram_perfect_experiment():
    dataset = make_dataset(4)
    gold = make_gold(4, [(A, B), (C, D)])
    experiment = make_experiment([(A, B, 0.9), (C, D, 0.8)])
    points = metric_metric_diagram(dataset, experiment, gold,
                                   "precision", "recall", 3)
    for p in points[1:]:
        assert p.x == pytest.approx(1.0)
    assert points[-1].y == pytest.approx(1.0)


def test_metric_metric_diagram_requires_similarities():
    dataset = make_dataset(3)
    gold = make_gold(3, [(0, 1)])
    experiment = make_experiment([(0, 1, None)])
    with pytest.raises(NoSimilarities):
        metric_metric_diagram(dataset, experiment, gold, "precision", "recall", 3)


def kpis(hours):
    return ExperimentKpis(setup_effort=EffortEntry(hours, 50))


def test_effort_diagram_single_point(worked):
    dataset, gold, _ = worked
    experiment = make_experiment([(A, B, 0.9)], exp_id="e1")
    experiment.soft_kpis = kpis(2.0)
    series = effort_metric_diagram(dataset, [experiment], gold)
    assert len(series) == 1
    assert len(series[0].points) == 1
    assert series[0].points[0].effort_hours == 2.0


def test_effort_diagram_running_max_is_monotone(worked):
    dataset, gold, _ = worked
    runs = []
    for i, (hours, matches) in enumerate([
        (1.0, [(A, C, 0.9)]),
        (2.0, [(A, B, 0.9), (C, D, 0.8)]),
        (3.0, [(A, B, 0.9)]),
    ]):
        e = make_experiment(matches, exp_id=f"e{i}")
        e.soft_kpis = kpis(hours)
        runs.append(e)
    series = effort_metric_diagram(dataset, runs, gold, running_max=True)
    values = [p.value for p in series[0].points if p.value is not None]
    assert values == sorted(values)


def test_effort_diagram_two_solutions_two_series(worked):
    dataset, gold, _ = worked
    e1 = make_experiment([(A, B, 0.9)], exp_id="e1", solution_id="s1")
    e2 = make_experiment([(C, D, 0.9)], exp_id="e2", solution_id="s2")
    e1.soft_kpis = kpis(1.0)
    e2.soft_kpis = kpis(2.0)
    series = effort_metric_diagram(dataset, [e1, e2], gold)
    assert {s.solution_id for s in series} == {"s1", "s2"}


def test_effort_diagram_missing_effort_raises(worked):
    dataset, gold, experiment = worked
    with pytest.raises(MissingEffort):
        effort_metric_diagram(dataset, [experiment], gold)
