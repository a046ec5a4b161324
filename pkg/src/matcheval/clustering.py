"""Union-find clustering with pair counting and the incremental
confusion-matrix sweep used for similarity-threshold diagrams.

The central pieces are:

* :class:`Clustering` -- a disjoint-set partition over dense record IDs
  that tracks, per cluster and in total, the number of intra-cluster
  record pairs.  Every merge mints a fresh cluster ID from a generation
  counter so that batched merges can be reported unambiguously.
* :meth:`Clustering.tracked_union` -- a batched union that reports which
  pre-batch clusters were absorbed into which new cluster.
* :class:`DynamicIntersection` -- the incrementally maintained common
  refinement (meet) of the evolving experiment clustering and a fixed
  ground-truth clustering.  Its total pair count equals the number of
  true-positive pairs at any point in time.
* :func:`confusion_matrix_sequence` -- the optimized threshold sweep,
  emitting one confusion matrix per sample while reusing clustering and
  intersection state between samples.
* :func:`naive_confusion_sequence` -- an independent oracle with the same
  contract that rebuilds everything from scratch for every sample.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CountInconsistency, InvalidSampleCount

Pair = tuple[int, int]
# (record_a, record_b, similarity or None)
ScoredPair = tuple[int, int, float | None]


@dataclass(frozen=True)
class MergeRecord:
    """One surviving cluster created by a batched union.

    ``sources`` are the IDs of the clusters that existed before the batch
    and are now part of ``target``.  Intermediate clusters created and
    absorbed within the same batch appear in neither field.
    """

    sources: tuple[int, ...]
    target: int


@dataclass(frozen=True)
class ConfusionMatrix:
    """Pair counts comparing an experiment against a ground truth."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.tp, self.fp, self.fn, self.tn)


class Clustering:
    """Disjoint-set partition of records ``0..n-1`` with pair counting.

    Uses union by size with path compression.  Cluster IDs are integers
    drawn from a generation counter: the initial singletons are clusters
    ``0..n-1`` and every union assigns the merged cluster a fresh ID, so
    IDs never clash across the lifetime of the structure.
    """

    __slots__ = ("n", "total_pair_count", "_parent", "_size", "_pairs",
                 "_cluster_id", "_next_id")

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("record count must be >= 0")
        self.n = n
        self.total_pair_count = 0
        self._parent = list(range(n))
        self._size = [1] * n
        self._pairs = [0] * n
        self._cluster_id = list(range(n))
        self._next_id = n

    # --- constructors -----------------------------------------------------

    @classmethod
    def singletons(cls, n: int) -> "Clustering":
        """``n`` clusters of size one, zero pairs."""
        return cls(n)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Pair]) -> "Clustering":
        """Transitive closure of ``pairs`` plus singletons for the rest."""
        c = cls(n)
        for a, b in pairs:
            c.union(a, b)
        return c

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Clustering":
        """Group records carrying the same label into one cluster."""
        c = cls(len(labels))
        first_seen: dict = {}
        for i, label in enumerate(labels):
            if label is None:
                continue
            if label in first_seen:
                c.union(first_seen[label], i)
            else:
                first_seen[label] = i
        return c

    # --- queries ------------------------------------------------------------

    def find(self, x: int) -> int:
        parent = self._parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def cluster_id_of(self, x: int) -> int:
        """Current cluster ID of the cluster containing record ``x``."""
        return self._cluster_id[self.find(x)]

    def size_of(self, x: int) -> int:
        return self._size[self.find(x)]

    def pair_count_of(self, x: int) -> int:
        """Intra-cluster pair count of the cluster containing ``x``."""
        return self._pairs[self.find(x)]

    def cluster_count(self) -> int:
        return sum(1 for i in range(self.n) if self._parent[i] == i)

    def members(self) -> dict[int, list[int]]:
        """Map from root record to the sorted members of its cluster."""
        out: dict[int, list[int]] = {}
        for i in range(self.n):
            out.setdefault(self.find(i), []).append(i)
        return out

    def labels(self) -> list[int]:
        """Per-record root representative (stable while no unions occur)."""
        return [self.find(i) for i in range(self.n)]

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(m) for m in self.members().values())

    # --- mutation -----------------------------------------------------------

    def _merge_roots(self, ra: int, rb: int) -> int:
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        cross = self._size[ra] * self._size[rb]
        self._size[ra] += self._size[rb]
        self._pairs[ra] += self._pairs[rb] + cross
        self.total_pair_count += cross
        self._cluster_id[ra] = self._next_id
        self._next_id += 1
        return ra

    def union(self, a: int, b: int) -> bool:
        """Merge the clusters of ``a`` and ``b``; False if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self._merge_roots(ra, rb)
        return True

    def tracked_union(self, pairs: Iterable[Pair]) -> list[MergeRecord]:
        """Batched union reporting which clusters were merged.

        Returns one :class:`MergeRecord` per cluster that was newly created
        during this batch and survived it.  ``sources`` always refer to
        cluster IDs from before the batch; already-merged pairs are no-ops
        and contribute nothing.
        """
        staged: dict[int, set[int]] = {}
        for a, b in pairs:
            ra, rb = self.find(a), self.find(b)
            if ra == rb:
                continue
            sources = staged.pop(ra, None)
            if sources is None:
                sources = {self._cluster_id[ra]}
            other = staged.pop(rb, None)
            if other is None:
                other = {self._cluster_id[rb]}
            sources |= other
            root = self._merge_roots(ra, rb)
            staged[root] = sources
        merges = [MergeRecord(sources=tuple(sorted(s)), target=self._cluster_id[r])
                  for r, s in staged.items()]
        merges.sort(key=lambda m: m.target)
        return merges

    # --- derived ------------------------------------------------------------

    def iter_pairs(self) -> Iterator[Pair]:
        """All intra-cluster record pairs in canonical (a < b) order."""
        for members in self.members().values():
            yield from itertools.combinations(members, 2)

    def pair_set(self) -> set[Pair]:
        return set(self.iter_pairs())


def transitive_closure_pairs(clustering: Clustering) -> set[Pair]:
    """All intra-cluster pairs; its size equals ``total_pair_count``."""
    return clustering.pair_set()


class DynamicIntersection:
    """Meet of an evolving experiment clustering and a fixed truth clustering.

    Each intersection cluster is identified by the pair (experiment
    cluster, truth cluster) and holds exactly the records those two have
    in common.  The structure is a pair-counting union-find plus a map
    ``experiment cluster ID -> truth cluster -> intersection cluster``;
    intersection clusters are addressed through one of their member
    records, which stays a valid handle across unions.

    ``pair_count`` equals the number of true-positive pairs of the
    experiment against the truth at all times.
    """

    __slots__ = ("_uf", "_truth_label", "_map")

    def __init__(self, truth: Clustering, n: int):
        if truth.n != n:
            raise ValueError("truth clustering does not cover the dataset")
        self._uf = Clustering(n)
        self._truth_label = [truth.find(i) for i in range(n)]
        # singleton experiment clusters carry IDs 0..n-1
        self._map: dict[int, dict[int, int]] = {
            r: {self._truth_label[r]: r} for r in range(n)
        }

    @property
    def pair_count(self) -> int:
        return self._uf.total_pair_count

    def apply_merges(self, merges: Iterable[MergeRecord]) -> None:
        """Fold experiment-cluster merges into the intersection.

        For every merge the involved intersection clusters are grouped by
        truth cluster and each group is unioned; groups of one are
        rebound without any union.
        """
        uf = self._uf
        imap = self._map
        for merge in merges:
            groups: dict[int, list[int]] = {}
            for source in merge.sources:
                for truth_cluster, handle in imap.pop(source).items():
                    groups.setdefault(truth_cluster, []).append(handle)
            merged: dict[int, int] = {}
            for truth_cluster, handles in groups.items():
                first = handles[0]
                for other in handles[1:]:
                    uf.union(first, other)
                merged[truth_cluster] = first
            imap[merge.target] = merged

    def partition(self) -> frozenset[frozenset[int]]:
        """Current meet partition (test hook)."""
        return self._uf.partition()


def init_intersection(truth: Clustering, n: int) -> DynamicIntersection:
    """Fresh intersection of all-singletons against ``truth``."""
    return DynamicIntersection(truth, n)


def confusion_from_counts(exp_pairs: int, tp_pairs: int, truth_pairs: int,
                          total_pairs: int) -> ConfusionMatrix:
    """Assemble a confusion matrix from the four tracked pair counts."""
    tp = tp_pairs
    fp = exp_pairs - tp
    fn = truth_pairs - tp
    tn = total_pairs - tp - fp - fn
    if min(tp, fp, fn, tn) < 0:
        raise CountInconsistency(
            f"inconsistent pair counts: exp={exp_pairs} tp={tp_pairs} "
            f"truth={truth_pairs} total={total_pairs}")
    return ConfusionMatrix(tp, fp, fn, tn)


# --- threshold sweep ---------------------------------------------------------

def order_matches(matches: Iterable[ScoredPair]) -> tuple[list[ScoredPair], int]:
    """Sort matches for the sweep; returns (ordered, unscored count).

    Matches without a similarity form the highest-similarity class and
    come first, ordered canonically; scored matches follow in descending
    similarity with ties broken by canonical pair order so the batches
    are deterministic.
    """
    unscored = sorted(((a, b, s) for a, b, s in matches if s is None),
                      key=lambda m: (m[0], m[1]))
    scored = sorted(((a, b, s) for a, b, s in matches if s is not None),
                    key=lambda m: (-m[2], m[0], m[1]))
    return unscored + scored, len(unscored)


def batch_stops(total: int, unscored: int, s: int) -> list[int]:
    """End index of each of the ``s - 1`` match ranges.

    Scored matches are split evenly with any remainder handed out one per
    earliest range; unscored matches are all consumed by the first range.
    """
    if s < 2:
        raise InvalidSampleCount(f"sample count must be >= 2, got {s}")
    ranges = s - 1
    scored = total - unscored
    base, remainder = divmod(scored, ranges)
    sizes = [base + (1 if i < remainder else 0) for i in range(ranges)]
    sizes[0] += unscored
    stops = list(itertools.accumulate(sizes))
    return stops


def confusion_matrix_sweep(
    n: int,
    truth: Clustering,
    matches: Sequence[ScoredPair],
    s: int,
) -> list[tuple[ConfusionMatrix, float | None]]:
    """Optimized sweep: ``s`` confusion matrices with their thresholds.

    Entry 0 reflects zero applied matches; entry ``i`` reflects all
    matches of the first ``i`` ranges.  The clustering and intersection
    state is reused between entries, never rebuilt.  The threshold
    attached to each entry is the similarity of the last scored match
    applied so far (``None`` while none is, i.e. threshold infinity).
    """
    ordered, unscored = order_matches(matches)
    stops = batch_stops(len(ordered), unscored, s)
    exp = Clustering(n)
    intersection = DynamicIntersection(truth, n)
    total = n * (n - 1) // 2
    truth_pairs = truth.total_pair_count

    def snapshot(threshold):
        matrix = confusion_from_counts(
            exp.total_pair_count, intersection.pair_count, truth_pairs, total)
        return (matrix, threshold)

    out = [snapshot(None)]
    threshold = None
    start = 0
    for stop in stops:
        batch = ordered[start:stop]
        merges = exp.tracked_union([(a, b) for a, b, _ in batch])
        intersection.apply_merges(merges)
        if stop > start and ordered[stop - 1][2] is not None:
            threshold = ordered[stop - 1][2]
        out.append(snapshot(threshold))
        start = stop
    return out


def confusion_matrix_sequence(
    n: int,
    truth: Clustering,
    matches: Sequence[ScoredPair],
    s: int,
) -> list[ConfusionMatrix]:
    """``s`` confusion matrices across the similarity sweep (optimized)."""
    return [matrix for matrix, _ in confusion_matrix_sweep(n, truth, matches, s)]


def naive_confusion_sequence(
    n: int,
    truth: Clustering,
    matches: Sequence[ScoredPair],
    s: int,
) -> list[ConfusionMatrix]:
    """Testing/benchmarking oracle for :func:`confusion_matrix_sequence`.

    Shares only the match ordering and range boundaries (they define the
    operation's contract); closure and intersection are recomputed from
    scratch for every sample with a private union-find and plain counting.
    """
    ordered, unscored = order_matches(matches)
    stops = [0] + batch_stops(len(ordered), unscored, s)
    truth_label = [truth.find(i) for i in range(n)]
    truth_pairs = sum(c * (c - 1) // 2 for c in Counter(truth_label).values())
    total = n * (n - 1) // 2

    out = []
    for stop in stops:
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b, _ in ordered[:stop]:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        exp_label = [find(i) for i in range(n)]
        exp_pairs = sum(c * (c - 1) // 2
                        for c in Counter(exp_label).values())
        tp = sum(c * (c - 1) // 2
                 for c in Counter(zip(exp_label, truth_label)).values())
        fp = exp_pairs - tp
        fn = truth_pairs - tp
        tn = total - tp - fp - fn
        out.append(ConfusionMatrix(tp, fp, fn, tn))
    return out


def closure_deficiency(n: int, original_pairs: Iterable[Pair]) -> int:
    """Pairs that must be added to make the match set transitively closed.

    Counts ``|closure(E)| - |E|`` over the distinct original matches.  The
    removal-side minimum of the full edit distance is cluster editing and
    out of scope here.
    """
    distinct = {(a, b) if a < b else (b, a) for a, b in original_pairs}
    closed = Clustering.from_pairs(n, distinct)
    return closed.total_pair_count - len(distinct)
