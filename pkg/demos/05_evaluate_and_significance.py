"""Scoring model outputs and testing significance between models.

Run: python demos/05_evaluate_and_significance.py
"""

import math
import random

import numpy as np

from moltask.evalkit import (
    corpus_bleu, exact_match_accuracy, f1_score, label_probabilities,
    mann_whitney_u, pr_auc, roc_auc, significance_grid, word_error_rate,
)

# -- sequence metrics over decoded text --------------------------------------
references = [["c", "1", "c", "c", "c", "c", "c", "1"], ["C", "C", "O"]]
candidates = [["c", "1", "c", "c", "c", "c", "c", "1"], ["C", "O"]]
print(f"BLEU:            {corpus_bleu(candidates, references):.4f}")
print(f"word error rate: {word_error_rate(candidates, references):.4f}")
print(f"exact match:     {exact_match_accuracy(candidates, references):.4f}")

# -- label probabilities from decoder logits ----------------------------------
# [batch=1, seq=2, vocab=3]; label token id 2
logits = np.array([[[0.0, 0.0, math.log(2)], [0.0, 0.0, 0.0]]],
                  dtype=np.float32)
probs = label_probabilities(logits, [2])
print(f"\nlabel probability: {probs[0, 0]:.3f} (softmax then max over seq)")

# -- classification metrics ----------------------------------------------------
scores = np.array([0.9, 0.8, 0.3, 0.2])
truths = np.array([1.0, 0.0, 1.0, 0.0])
print(f"F1 @0.5:  {f1_score(scores, truths):.4f}")
print(f"ROC-AUC:  {roc_auc(scores, truths):.4f}")
print(f"PR-AUC:   {pr_auc(scores, truths):.4f}")

# -- one-sided Mann-Whitney and the model-vs-model grid ------------------------
u, p = mann_whitney_u([3, 4, 5], [0, 1, 2], "greater")
print(f"\nU={u}, exact one-sided p={p}")

rng = random.Random(0)
fold_scores = {
    "combined": [0.84 + rng.uniform(0, 0.03) for _ in range(10)],
    "masked": [0.78 + rng.uniform(0, 0.03) for _ in range(10)],
    "scaffold": [0.81 + rng.uniform(0, 0.04) for _ in range(10)],
}
grid = significance_grid(fold_scores)
print("\nrow beats column (p < 0.05)?")
header = "".join(f"{m:>10}" for m in grid.models)
print(f"{'':>10}{header}")
for name, row in zip(grid.models, grid.significant):
    cells = "".join(
        f"{'-' if c is None else ('yes' if c else 'no'):>10}" for c in row
    )
    print(f"{name:>10}{cells}")
