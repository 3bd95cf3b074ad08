"""Evaluation metrics: sequence scores, label-probability extraction,
classification metrics, and nonparametric significance testing."""

from .seqmetrics import corpus_bleu, exact_match_accuracy, word_error_rate
from .classification import (
    LogitsBlock, f1_score, label_probabilities, pr_auc, roc_auc,
)
from .stats import (
    MetricReport, SignificanceGrid, mann_whitney_u, significance_grid,
)
from .tensorio import read_sidecar, read_tensor, write_sidecar, write_tensor

__all__ = [
    "corpus_bleu", "word_error_rate", "exact_match_accuracy",
    "LogitsBlock", "label_probabilities", "f1_score", "roc_auc", "pr_auc",
    "mann_whitney_u", "significance_grid", "SignificanceGrid",
    "MetricReport",
    "read_tensor", "write_tensor", "read_sidecar", "write_sidecar",
]
