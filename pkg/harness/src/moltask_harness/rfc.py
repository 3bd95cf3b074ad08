"""Random-forest classification over pooled embeddings."""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass

import numpy as np
from sklearn.ensemble import RandomForestClassifier

N_ESTIMATORS = 256


def _f1(preds: np.ndarray, truths: np.ndarray) -> float:
    tp = int(np.sum((preds == 1) & (truths == 1)))
    fp = int(np.sum((preds == 1) & (truths == 0)))
    fn = int(np.sum((preds == 0) & (truths == 1)))
    denom = 2 * tp + fp + fn
    return 0.0 if denom == 0 else 2 * tp / denom


@dataclass
class RfResult:
    fold_f1: dict  # fold name -> F1 on that fold
    permutation_f1: dict  # same, with labels permuted before fitting


def load_split_csv(path, seed: int | None = None) -> dict:
    """source_id -> fold from a split CSV (optionally one seed of many)."""
    folds = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            if seed is not None and int(row.get("seed", 0)) != seed:
                continue
            folds[row["source_id"]] = row["fold"]
    if not folds:
        raise ValueError(f"{path}: no rows for seed {seed}")
    return folds


def rf_classify(embeddings: np.ndarray, labels: np.ndarray,
                fold_of: list, seed: int = 0,
                with_permutation_baseline: bool = False) -> RfResult:
    """Fit a 256-estimator random forest on the train fold and score F1
    on each evaluation fold.

    ``fold_of`` assigns each row to train/valid/test.  The optional
    permutation baseline refits on shuffled training labels to show the
    floor a label-independent model achieves.
    """
    embeddings = np.asarray(embeddings)
    labels = np.asarray(labels).astype(int)
    fold_of = list(fold_of)
    if not (len(embeddings) == len(labels) == len(fold_of)):
        raise ValueError("embeddings, labels, and folds must align")
    train_idx = [i for i, f in enumerate(fold_of) if f == "train"]
    if not train_idx:
        raise ValueError("no training rows")

    def fit_and_score(train_labels: np.ndarray) -> dict:
        clf = RandomForestClassifier(
            n_estimators=N_ESTIMATORS, random_state=seed, n_jobs=-1
        )
        clf.fit(embeddings[train_idx], train_labels)
        scores = {}
        for fold in ("train", "valid", "test"):
            idx = [i for i, f in enumerate(fold_of) if f == fold]
            if not idx:
                continue
            preds = clf.predict(embeddings[idx])
            scores[fold] = _f1(preds, labels[idx])
        return scores

    fold_f1 = fit_and_score(labels[train_idx])
    permutation_f1 = {}
    if with_permutation_baseline:
        rng = random.Random(seed)
        shuffled = labels[train_idx].copy()
        order = list(range(len(shuffled)))
        rng.shuffle(order)
        permutation_f1 = fit_and_score(shuffled[order])
    return RfResult(fold_f1=fold_f1, permutation_f1=permutation_f1)
