"""Classification metrics over label probabilities.

Probabilities come from decoder logits: per-position softmax over the
vocabulary, per-token maximum over the output sequence, then the label
token columns.  Missing truths (NaN) are masked out per task, as needed
for sparsely labelled multilabel benchmarks.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = ["LogitsBlock", "label_probabilities", "f1_score", "roc_auc",
           "pr_auc", "roc_auc_per_task", "pr_auc_per_task"]


@dataclass
class LogitsBlock:
    """Dense decoder logits plus the ordered label-token ids."""

    logits: np.ndarray  # [batch, sequence, vocabulary], float32
    label_token_ids: tuple[int, ...]
    label_names: tuple[str, ...] = ()

    def __post_init__(self):
        self.logits = np.asarray(self.logits, dtype=np.float32)
        if self.logits.ndim != 3:
            raise ValueError(
                f"logits must be [batch, seq, vocab], got {self.logits.shape}"
            )
        vocab = self.logits.shape[2]
        for tid in self.label_token_ids:
            if not 0 <= tid < vocab:
                raise ValueError(
                    f"label token id {tid} outside vocabulary of {vocab}"
                )
        if self.label_names and len(self.label_names) != len(self.label_token_ids):
            raise ValueError("label names and token ids must pair up")


def label_probabilities(block, label_token_ids=None) -> np.ndarray:
    """[batch, n_labels] maximum output probability per label token.

    Accepts a :class:`LogitsBlock` or a raw [batch, seq, vocab] array
    with ``label_token_ids``.
    """
    if isinstance(block, LogitsBlock):
        logits = block.logits
        ids = list(block.label_token_ids)
    else:
        logits = np.asarray(block)
        if label_token_ids is None:
            raise ValueError("label token ids are required with raw logits")
        ids = list(label_token_ids)
    if logits.ndim != 3:
        raise ValueError(f"logits must be [batch, seq, vocab], got {logits.shape}")
    bad = ~np.isfinite(logits)
    if bad.any():
        record = int(np.argwhere(bad.any(axis=(1, 2)))[0][0])
        raise ValueError(f"non-finite logits in record {record}")
    x = logits.astype(np.float64)
    x -= x.max(axis=2, keepdims=True)
    e = np.exp(x)
    probs = e / e.sum(axis=2, keepdims=True)
    per_token_max = probs.max(axis=1)  # [batch, vocab]
    return per_token_max[:, ids]


def _prf(preds: np.ndarray, truths: np.ndarray) -> tuple[int, int, int]:
    tp = int(np.sum((preds == 1) & (truths == 1)))
    fp = int(np.sum((preds == 1) & (truths == 0)))
    fn = int(np.sum((preds == 0) & (truths == 1)))
    return tp, fp, fn


def _f1_from_counts(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    if denom == 0:
        return 0.0
    return 2 * tp / denom


def f1_score(probs, truths, threshold: float = 0.5,
             averaging: str = "binary") -> float:
    """F1 at a probability threshold.

    ``binary`` expects one task; ``micro`` pools counts across tasks;
    ``macro`` averages per-task F1.  Zero division yields 0.  NaN truths
    are ignored.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie strictly inside (0, 1)")
    probs = np.asarray(probs, dtype=np.float64)
    truths = np.asarray(truths, dtype=np.float64)
    if probs.shape != truths.shape:
        raise ValueError(
            f"shape mismatch: probs {probs.shape} vs truths {truths.shape}"
        )
    mask = ~np.isnan(truths)
    preds = (probs >= threshold).astype(np.int8)
    if averaging == "binary":
        if probs.ndim != 1:
            raise ValueError("binary averaging expects 1-D inputs")
        return _f1_from_counts(*_prf(preds[mask], truths[mask]))
    if probs.ndim == 1:
        probs = probs[:, None]
        truths = truths[:, None]
        preds = preds[:, None]
        mask = mask[:, None]
    if averaging == "micro":
        return _f1_from_counts(*_prf(preds[mask], truths[mask]))
    if averaging == "macro":
        scores = [
            _f1_from_counts(*_prf(preds[:, t][mask[:, t]],
                                  truths[:, t][mask[:, t]]))
            for t in range(truths.shape[1])
        ]
        return float(np.mean(scores)) if scores else 0.0
    raise ValueError("averaging must be binary, micro, or macro")


def _roc_auc_binary(probs: np.ndarray, truths: np.ndarray) -> float:
    """Rank statistic with ties counted half: the probability a random
    positive outranks a random negative."""
    pos = truths == 1
    neg = truths == 0
    n_pos = int(pos.sum())
    n_neg = int(neg.sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("both classes are required")
    order = np.argsort(probs, kind="mergesort")
    ranks = np.empty(len(probs), dtype=np.float64)
    sorted_probs = probs[order]
    i = 0
    rank = 1
    while i < len(sorted_probs):
        j = i
        while j + 1 < len(sorted_probs) and sorted_probs[j + 1] == sorted_probs[i]:
            j += 1
        mid = (rank + rank + (j - i)) / 2.0
        ranks[order[i:j + 1]] = mid
        rank += j - i + 1
        i = j + 1
    rank_sum = ranks[pos].sum()
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def _pr_auc_binary(probs: np.ndarray, truths: np.ndarray) -> float:
    """Step-wise precision-recall integration (precision held constant
    to the right of each recall step; no trapezoid interpolation)."""
    pos_total = int((truths == 1).sum())
    if pos_total == 0 or int((truths == 0).sum()) == 0:
        raise ValueError("both classes are required")
    order = np.argsort(-probs, kind="mergesort")
    sorted_truths = truths[order]
    sorted_probs = probs[order]
    auc = 0.0
    tp = 0
    seen = 0
    prev_recall = 0.0
    i = 0
    n = len(probs)
    while i < n:
        j = i
        while j + 1 < n and sorted_probs[j + 1] == sorted_probs[i]:
            j += 1
        tp += int((sorted_truths[i:j + 1] == 1).sum())
        seen += j - i + 1
        recall = tp / pos_total
        precision = tp / seen
        auc += (recall - prev_recall) * precision
        prev_recall = recall
        i = j + 1
    return float(auc)


def _per_task(metric, probs, truths):
    probs = np.asarray(probs, dtype=np.float64)
    truths = np.asarray(truths, dtype=np.float64)
    if probs.shape != truths.shape:
        raise ValueError(
            f"shape mismatch: probs {probs.shape} vs truths {truths.shape}"
        )
    if probs.ndim == 1:
        probs = probs[:, None]
        truths = truths[:, None]
    scores: list[float | None] = []
    for t in range(truths.shape[1]):
        col_mask = ~np.isnan(truths[:, t])
        p = probs[:, t][col_mask]
        y = truths[:, t][col_mask]
        try:
            scores.append(metric(p, y))
        except ValueError:
            warnings.warn(
                f"task {t} has a single class; excluded from the average",
                stacklevel=3,
            )
            scores.append(None)
    return scores


def roc_auc_per_task(probs, truths) -> list:
    """Per-task ROC-AUC; single-class tasks yield None."""
    return _per_task(_roc_auc_binary, probs, truths)


def pr_auc_per_task(probs, truths) -> list:
    """Per-task PR-AUC; single-class tasks yield None."""
    return _per_task(_pr_auc_binary, probs, truths)


def roc_auc(probs, truths) -> float:
    """ROC-AUC, averaged over tasks that have both classes."""
    scores = [s for s in roc_auc_per_task(probs, truths) if s is not None]
    if not scores:
        raise ValueError("no task has both classes")
    return float(np.mean(scores))


def pr_auc(probs, truths) -> float:
    """PR-AUC, averaged over tasks that have both classes."""
    scores = [s for s in pr_auc_per_task(probs, truths) if s is not None]
    if not scores:
        raise ValueError("no task has both classes")
    return float(np.mean(scores))
