"""Pooled embeddings: length, special-token exclusion, consistency."""

import numpy as np
import torch

from moltask_harness import ModelShape, Seq2SeqModel, Vocab, embed_token_lists
from moltask_harness.data import Example, make_batch
from moltask_harness.vocab import SPECIALS


def make_model(d=32):
    vocab = Vocab(SPECIALS + ("scaffold:", "<extra_id_0>", "C", "c", "O",
                              "1", "(", ")"))
    torch.manual_seed(0)
    model = Seq2SeqModel(len(vocab), ModelShape(d, 1, 2, 64), dropout=0.0)
    model.eval()
    return model, vocab


def test_vector_length_equals_embedding_size():
    model, vocab = make_model(d=48)
    out = embed_token_lists(model, [["C", "C", "O"]], vocab)
    assert out.shape == (1, 48)


def test_duplicate_inputs_identical():
    model, vocab = make_model()
    out = embed_token_lists(model, [["C", "O"], ["C", "O"]], vocab)
    assert np.allclose(out[0], out[1])


def test_batching_does_not_change_vectors():
    model, vocab = make_model()
    tokens = [["C", "C", "O"], ["c", "1", "c", "c", "c", "c", "c", "1"],
              ["O"]]
    together = embed_token_lists(model, tokens, vocab)
    separate = np.concatenate(
        [embed_token_lists(model, [t], vocab) for t in tokens]
    )
    assert np.allclose(together, separate, atol=1e-5)


def test_pooling_matches_manual_mean():
    model, vocab = make_model()
    tokens = ["scaffold:", "C", "C", "O"]
    batch = make_batch([Example("x", "t", tokens, [])], vocab)
    with torch.no_grad():
        hidden = model.encode(batch.src, batch.src_pad)[0]
    # manual: average rows of non-special positions only
    keep = [i for i, tok in enumerate(tokens) if tok != "scaffold:"]
    manual = hidden[keep].mean(dim=0).numpy()
    pooled = embed_token_lists(model, [tokens], vocab)[0]
    assert np.allclose(pooled, manual, atol=1e-6)


def test_masked_position_audit():
    # pooling must average exactly the non-special positions: including
    # the specials in the mean gives a measurably different vector
    model, vocab = make_model()
    tokens = ["scaffold:", "C", "C", "O", "<extra_id_0>"]
    batch = make_batch([Example("x", "t", tokens, [])], vocab)
    with torch.no_grad():
        hidden = model.encode(batch.src, batch.src_pad)[0]
    keep = [i for i, tok in enumerate(tokens) if tok in ("C", "O")]
    expected = hidden[keep].mean(dim=0).numpy()
    with_specials = hidden.mean(dim=0).numpy()
    pooled = embed_token_lists(model, [tokens], vocab)[0]
    assert np.allclose(pooled, expected, atol=1e-6)
    assert not np.allclose(pooled, with_specials, atol=1e-4)
