"""Secondary acceptance criteria: toy direction-of-effect and the
embedding/random-forest pipeline."""

import numpy as np
import torch

from moltask_harness import (
    ModelShape, Seq2SeqModel, Vocab, embed_token_lists, rf_classify,
)
from moltask_harness.train import train
from moltask_harness.vocab import SPECIALS

from conftest import build_corpus_via_cli
from molgen import sample_molecules


def _report(criterion: int, message: str) -> None:
    print(f"[PASS] criterion {criterion}: {message}")


def test_criterion_8_toy_direction_of_effect(tmp_path_factory):
    tmpdir = tmp_path_factory.mktemp("toy_run")
    corpus = build_corpus_via_cli(
        tmpdir, sample_molecules(5000, seed=8), seed=8
    )
    result = train(
        corpus, ModelShape(64, 2, 4, 256), steps=2500, seed=0,
        out_dir=tmpdir / "run", log_every=150, target_exact_match=0.6,
    )
    assert result.initial_exact_match < 0.05, result.initial_exact_match
    assert result.final_exact_match >= 0.6, result.log
    elapsed = result.log[-1]["elapsed_s"]
    _report(8, f"held-out exact match {result.final_exact_match:.3f} "
               f"(untrained {result.initial_exact_match:.3f}) after "
               f"{result.log[-1]['step']} steps, {elapsed:.0f}s CPU")


def test_criterion_9_embedding_pipeline():
    # Table presets validated structurally.
    assert ModelShape.from_preset("small") == ModelShape(512, 6, 8, 2048, "small")
    assert ModelShape.from_preset("base") == ModelShape(768, 12, 12, 3072, "base")
    assert ModelShape.from_preset("xl") == ModelShape(1024, 24, 32, 16384, "xl")

    # The small preset really produces 512-long pooled vectors.
    vocab = Vocab(SPECIALS + ("C", "c", "O", "1"))
    torch.manual_seed(0)
    small = Seq2SeqModel(len(vocab), ModelShape.from_preset("small"),
                         dropout=0.0)
    small.eval()
    pooled = embed_token_lists(small, [["C", "C", "O"]], vocab)
    assert pooled.shape == (1, 512)
    del small

    # Random forest (256 estimators) beats a label-permutation baseline
    # by a wide margin on a separable synthetic set.
    rng = np.random.default_rng(0)
    n = 240
    labels = rng.integers(0, 2, size=n)
    emb = np.where(labels[:, None] == 1, 1.5, -1.5) + rng.normal(
        scale=0.4, size=(n, 32)
    )
    folds = ["train"] * 160 + ["valid"] * 40 + ["test"] * 40
    result = rf_classify(emb, labels, folds, seed=0,
                         with_permutation_baseline=True)
    margin = result.fold_f1["test"] - result.permutation_f1["test"]
    assert margin >= 0.1, (result.fold_f1, result.permutation_f1)
    _report(9, f"small-preset embedding length 512; RF F1 "
               f"{result.fold_f1['test']:.3f} vs permutation "
               f"{result.permutation_f1['test']:.3f} (margin {margin:.3f})")
