import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matcheval.clustering import Clustering, ConfusionMatrix
from matcheval.errors import EmptyClustering, FewerThanThreeExperiments
from matcheval.metrics import (
    DatasetProfile,
    closest_cluster_f1,
    closest_cluster_scores,
    generalized_merge_distance,
    majority_vote_deviation,
    pair_metric,
    pair_metrics,
    profile_dataset,
    rank_benchmark_datasets,
    unit_cost,
    variation_of_information,
    vocabulary_similarity,
)
from matcheval.model import Dataset, GoldStandard

from .oracles import (
    canonical,
    edit_distance_oracle,
    partition_pairs,
    set_partitions,
    to_clustering,
)


def metric_map(matrix):
    return {m.name: m for m in pair_metrics(matrix)}


# --- pair metrics: frozen examples ------------------------------------------------

def test_pair_metrics_step1_matrix():
    values = metric_map(ConfusionMatrix(0, 1, 2, 3))
    assert values["precision"].value == 0.0
    assert values["recall"].value == 0.0
    assert values["f1"].value is None  # 0/0 stays undefined, not zero


def test_pair_metrics_perfect_matcher():
    values = metric_map(ConfusionMatrix(2, 0, 0, 4))
    for name in ("precision", "recall", "f1", "f_star", "fowlkes_mallows", "mcc"):
        assert values[name].value == pytest.approx(1.0)


def test_pair_metrics_derived_example():
    # cross-checked against a second independent implementation (sklearn)
    values = metric_map(ConfusionMatrix(3, 1, 2, 4))
    assert values["precision"].value == pytest.approx(0.75)
    assert values["recall"].value == pytest.approx(0.6)
    assert values["f1"].value == pytest.approx(2 / 3, abs=1e-4)
    assert values["f_star"].value == pytest.approx(0.5)
    assert values["fowlkes_mallows"].value == pytest.approx(0.6708, abs=1e-4)
    assert values["mcc"].value == pytest.approx(0.408248, abs=1e-6)
    assert values["accuracy"].value == pytest.approx(0.7)
    assert values["reduction_ratio"].value == pytest.approx(0.6)


def test_true_negative_readers_are_flagged():
    flagged = {m.name for m in pair_metrics(ConfusionMatrix(1, 1, 1, 1))
               if m.reads_true_negatives}
    assert flagged == {"accuracy", "mcc", "reduction_ratio", "specificity"}


def random_matrix(rng):
    n = rng.randrange(2, 500)
    total = n * (n - 1) // 2
    cuts = sorted(rng.randrange(0, total + 1) for _ in range(3))
    return ConfusionMatrix(cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1],
                           total - cuts[2])


def test_pair_metric_identities_random():
    rng = random.Random(2024)
    for _ in range(2000):
        m = random_matrix(rng)
        values = metric_map(m)
        assert m.total == m.tp + m.fp + m.fn + m.tn
        f1, fstar = values["f1"].value, values["f_star"].value
        if f1 is not None and fstar is not None:
            assert f1 == pytest.approx(2 * fstar / (1 + fstar), rel=1e-12)
        fm = values["fowlkes_mallows"].value
        p, r = values["precision"].value, values["recall"].value
        if fm is not None:
            assert fm == pytest.approx(math.sqrt(p * r), rel=1e-12)
        mcc = values["mcc"].value
        if mcc is not None:
            assert -1.0 - 1e-12 <= mcc <= 1.0 + 1e-12
        for name in ("precision", "recall", "f1", "f_star", "accuracy",
                     "fowlkes_mallows", "reduction_ratio", "specificity"):
            v = values[name].value
            if v is not None:
                assert -1e-12 <= v <= 1 + 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 300), st.integers(0, 300), st.integers(0, 300),
       st.integers(0, 300))
def test_pair_metric_ranges_hypothesis(tp, fp, fn, tn):
    values = metric_map(ConfusionMatrix(tp, fp, fn, tn))
    mcc = values["mcc"].value
    if mcc is not None:
        assert -1.0 - 1e-12 <= mcc <= 1.0 + 1e-12
    f1, fstar = values["f1"].value, values["f_star"].value
    if f1 is not None and fstar is not None:
        assert f1 == pytest.approx(2 * fstar / (1 + fstar), rel=1e-9)


# --- closest cluster f1 ---------------------------------------------------------

def test_closest_cluster_identical_partitions():
    c = Clustering.from_pairs(5, [(0, 1), (2, 3)])
    assert closest_cluster_f1(c, c).value == pytest.approx(1.0)


def test_closest_cluster_all_singletons():
    a, b = Clustering.singletons(4), Clustering.singletons(4)
    assert closest_cluster_f1(a, b).value == pytest.approx(1.0)


def test_closest_cluster_derived_example():
    exp = Clustering.from_pairs(4, [(0, 1), (1, 2), (2, 3)])
    truth = Clustering.from_pairs(4, [(0, 1), (2, 3)])
    precision, recall, f1 = closest_cluster_scores(exp, truth)
    assert precision == pytest.approx(0.5)
    assert recall == pytest.approx(0.5)
    assert f1 == pytest.approx(0.5)


def test_closest_cluster_one_iff_identical():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randrange(1, 8)
        a = to_clustering(rng.choice(list(set_partitions(range(n)))), n)
        b = to_clustering(rng.choice(list(set_partitions(range(n)))), n)
        f1 = closest_cluster_f1(a, b).value
        if a.partition() == b.partition():
            assert f1 == pytest.approx(1.0)
        else:
            assert f1 < 1.0 - 1e-12


def test_closest_cluster_empty_raises():
    with pytest.raises(EmptyClustering):
        closest_cluster_f1(Clustering.singletons(0), Clustering.singletons(0))


def test_cluster_metrics_invariant_under_relabeling():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randrange(2, 7)
        exp_part = rng.choice(list(set_partitions(range(n))))
        truth_part = rng.choice(list(set_partitions(range(n))))
        perm = list(range(n))
        rng.shuffle(perm)
        exp_p = [[perm[r] for r in c] for c in exp_part]
        truth_p = [[perm[r] for r in c] for c in truth_part]
        before = closest_cluster_f1(to_clustering(exp_part, n),
                                    to_clustering(truth_part, n)).value
        after = closest_cluster_f1(to_clustering(exp_p, n),
                                   to_clustering(truth_p, n)).value
        assert before == pytest.approx(after)
        vi_before = variation_of_information(
            to_clustering(exp_part, n), to_clustering(truth_part, n)).value
        vi_after = variation_of_information(
            to_clustering(exp_p, n), to_clustering(truth_p, n)).value
        assert vi_before == pytest.approx(vi_after)


# --- variation of information ------------------------------------------------------

def test_vi_identical_is_zero():
    c = Clustering.from_pairs(6, [(0, 1), (2, 3), (4, 5)])
    assert variation_of_information(c, c).value == pytest.approx(0.0)


def test_vi_crossed_pairs_is_two_ln_two():
    a = Clustering.from_pairs(4, [(0, 1), (2, 3)])
    b = Clustering.from_pairs(4, [(0, 2), (1, 3)])
    assert variation_of_information(a, b).value == pytest.approx(2 * math.log(2))


def test_vi_symmetry_and_triangle_on_random_partitions():
    rng = random.Random(17)
    for _ in range(60):
        n = rng.randrange(1, 8)
        parts = list(set_partitions(range(n)))
        a, b, c = (to_clustering(rng.choice(parts), n) for _ in range(3))
        ab = variation_of_information(a, b).value
        ba = variation_of_information(b, a).value
        assert ab == pytest.approx(ba)
        ac = variation_of_information(a, c).value
        cb = variation_of_information(c, b).value
        assert ab <= ac + cb + 1e-9


# --- generalized merge distance ------------------------------------------------------

def test_gmd_identical_is_zero():
    c = Clustering.from_pairs(5, [(0, 1), (1, 2)])
    assert generalized_merge_distance(c, c).value == 0.0
    weird = generalized_merge_distance(
        c, c, merge_cost=lambda x, y: 9.0, split_cost=lambda x, y: 5.0)
    assert weird.value == 0.0


def test_gmd_single_merge():
    source = Clustering.singletons(2)
    target = Clustering.from_pairs(2, [(0, 1)])
    assert generalized_merge_distance(source, target).value == 1.0


def test_gmd_matches_exhaustive_search_unit_costs():
    for n in (1, 2, 3, 4):
        for src in set_partitions(range(n)):
            for dst in set_partitions(range(n)):
                got = generalized_merge_distance(
                    to_clustering(src, n), to_clustering(dst, n)).value
                want = edit_distance_oracle(src, dst, unit_cost, unit_cost)
                assert got == pytest.approx(want), (src, dst)


def test_gmd_matches_exhaustive_search_product_costs():
    product = lambda x, y: float(x * y)
    rng = random.Random(23)
    for _ in range(60):
        n = rng.randrange(2, 6)
        parts = list(set_partitions(range(n)))
        src, dst = rng.choice(parts), rng.choice(parts)
        got = generalized_merge_distance(
            to_clustering(src, n), to_clustering(dst, n), product, product).value
        want = edit_distance_oracle(src, dst, product, product)
        assert got == pytest.approx(want), (src, dst)


# --- majority vote deviation ----------------------------------------------------------

def test_majority_vote_identical_experiments():
    pairs = {(0, 1), (2, 3)}
    out = majority_vote_deviation([set(pairs)] * 3, names=["x", "y", "z"])
    assert out == {"x": 0, "y": 0, "z": 0}


def test_majority_vote_single_dissenter():
    out = majority_vote_deviation([{(0, 1)}, {(0, 1)}, set()])
    assert out == {"0": 0, "1": 0, "2": 1}


def test_majority_vote_requires_three():
    with pytest.raises(FewerThanThreeExperiments):
        majority_vote_deviation([{(0, 1)}, set()])


def test_majority_vote_matches_brute_force():
    rng = random.Random(31)
    all_pairs = list(itertools.combinations(range(5), 2))
    for _ in range(50):
        k = rng.randrange(3, 6)
        sets = [
            {p for p in all_pairs if rng.random() < 0.4} for _ in range(k)]
        got = majority_vote_deviation(sets)
        # direct tally
        want = {str(i): 0 for i in range(k)}
        for pair in {p for s in sets for p in s}:
            votes = sum(pair in s for s in sets)
            if votes * 2 == k:
                continue
            majority = votes * 2 > k
            for i, s in enumerate(sets):
                if (pair in s) != majority:
                    want[str(i)] += 1
        assert got == want


# --- profiling -----------------------------------------------------------------------

def make_dataset(records, attributes=None):
    attributes = attributes or [f"a{i}" for i in range(len(records[0]) if records else 0)]
    return Dataset(id="d", name="d", attribute_names=attributes,
                   native_ids=[f"r{i}" for i in range(len(records))],
                   records=records)


def test_profile_all_null_dataset():
    ds = make_dataset([[None, None], [None, None]])
    profile = profile_dataset(ds)
    assert profile.sparsity == 1.0
    assert profile.textuality == 0.0


def test_profile_textuality_two_words():
    ds = make_dataset([["hello world"]])
    assert profile_dataset(ds).textuality == 2.0


def test_profile_positive_ratio():
    ds = make_dataset([["x"], ["x"], ["y"], ["z"]])
    truth = GoldStandard(id="g", dataset_id="d",
                         clustering=Clustering.from_pairs(4, [(0, 1)]))
    profile = profile_dataset(ds, truth)
    assert profile.positive_ratio == pytest.approx(1 / 6)
    assert profile.tuple_count == 4


def test_profile_without_gold_has_no_positive_ratio():
    assert profile_dataset(make_dataset([["x"]])).positive_ratio is None


def test_vocabulary_similarity_examples():
    assert vocabulary_similarity({"a", "b", "c"}, {"a", "b", "c"}) == 1.0
    assert vocabulary_similarity({"a"}, {"b"}) == 0.0
    assert vocabulary_similarity({"a", "b", "c"}, {"b", "c", "d"}) == 0.5
    assert vocabulary_similarity(set(), set()) == 0.0


# --- benchmark ranking ------------------------------------------------------------------

def profile(name, sparsity, textuality, count, positive, vocab):
    return DatasetProfile(name=name, sparsity=sparsity, textuality=textuality,
                          tuple_count=count, positive_ratio=positive,
                          vocabulary=frozenset(vocab))


def test_rank_exact_match_comes_first():
    target = profile("target", 0.2, 3.0, 100, 0.1, {"a", "b"})
    twin = profile("twin", 0.2, 3.0, 100, 0.1, {"a", "b"})
    other = profile("other", 0.9, 12.0, 5000, 0.01, {"z"})
    ranked = rank_benchmark_datasets([other, twin], target)
    assert ranked[0].name == "twin"
    assert ranked[0].score == pytest.approx(0.0)


def test_rank_single_candidate():
    target = profile("t", 0.5, 1.0, 10, None, {"a"})
    only = profile("only", 0.1, 9.0, 99, None, set())
    assert rank_benchmark_datasets([only], target)[0].name == "only"


def test_rank_zero_weights_fall_back_to_name_order():
    target = profile("t", 0.5, 1.0, 10, 0.5, {"a"})
    c1 = profile("beta", 0.1, 9.0, 99, 0.1, set())
    c2 = profile("alpha", 0.9, 2.0, 5, 0.9, {"q"})
    ranked = rank_benchmark_datasets([c1, c2], target, weights={})
    assert [r.name for r in ranked] == ["alpha", "beta"]
