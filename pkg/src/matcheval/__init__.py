"""matcheval: evaluation and exploration of entity-resolution results."""

from .clustering import (
    Clustering,
    ConfusionMatrix,
    DynamicIntersection,
    MergeRecord,
    closure_deficiency,
    confusion_from_counts,
    confusion_matrix_sequence,
    naive_confusion_sequence,
    transitive_closure_pairs,
)

__all__ = [
    "Clustering",
    "ConfusionMatrix",
    "DynamicIntersection",
    "MergeRecord",
    "closure_deficiency",
    "confusion_from_counts",
    "confusion_matrix_sequence",
    "naive_confusion_sequence",
    "transitive_closure_pairs",
]

__version__ = "0.1.0"
