from src.evaluation.compare import CompareConfig, ComparisonReport, MethodRow, annotation_disc, compare_methods
from src.evaluation.overlap import OverlapRow, overlap
from src.evaluation.screening import ConfusionMatrix, confusion, screening_metrics, wilson_ci

__all__ = [
    "CompareConfig",
    "ComparisonReport",
    "ConfusionMatrix",
    "MethodRow",
    "OverlapRow",
    "annotation_disc",
    "compare_methods",
    "confusion",
    "overlap",
    "screening_metrics",
    "wilson_ci",
]
