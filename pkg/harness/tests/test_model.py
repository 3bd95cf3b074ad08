"""Model shapes, determinism, and the finite-difference gradient check."""

import pytest
import torch

from moltask_harness import ModelShape, Seq2SeqModel, Vocab
from moltask_harness.vocab import SPECIALS


def make_vocab(extra=("C", "c", "O", "1", "(", ")")) -> Vocab:
    return Vocab(SPECIALS + tuple(extra))


def test_preset_table():
    assert ModelShape.from_preset("small") == ModelShape(512, 6, 8, 2048, "small")
    assert ModelShape.from_preset("base") == ModelShape(768, 12, 12, 3072, "base")
    assert ModelShape.from_preset("xl") == ModelShape(1024, 24, 32, 16384, "xl")
    with pytest.raises(ValueError):
        ModelShape.from_preset("giant")


def test_encoder_and_decoder_shapes():
    vocab = make_vocab()
    shape = ModelShape(32, 2, 4, 64)
    model = Seq2SeqModel(len(vocab), shape, dropout=0.0)
    src = torch.randint(0, len(vocab), (3, 11))
    pad = torch.zeros(3, 11, dtype=torch.bool)
    memory = model.encode(src, pad)
    assert memory.shape == (3, 11, 32)
    tgt = torch.randint(0, len(vocab), (3, 5))
    logits = model.decode(tgt, memory, pad)
    assert logits.shape == (3, 5, len(vocab))


def test_greedy_decode_shapes():
    vocab = make_vocab()
    model = Seq2SeqModel(len(vocab), ModelShape(32, 1, 2, 64), dropout=0.0)
    src = torch.randint(0, len(vocab), (4, 7))
    pad = torch.zeros(4, 7, dtype=torch.bool)
    ids, logits = model.greedy_decode(src, pad, vocab.bos_id, vocab.eos_id,
                                      max_steps=9)
    assert ids.shape == (4, 9)
    assert logits.shape == (4, 9, len(vocab))


def test_deterministic_init_given_seed():
    vocab = make_vocab()
    torch.manual_seed(7)
    a = Seq2SeqModel(len(vocab), ModelShape(16, 1, 2, 32))
    torch.manual_seed(7)
    b = Seq2SeqModel(len(vocab), ModelShape(16, 1, 2, 32))
    for pa, pb in zip(a.parameters(), b.parameters()):
        assert torch.equal(pa, pb)


def test_gradient_matches_finite_differences():
    torch.manual_seed(0)
    vocab = make_vocab()
    model = Seq2SeqModel(len(vocab), ModelShape(16, 1, 2, 32),
                         dropout=0.0).double()
    model.train()
    src = torch.randint(0, len(vocab), (2, 6))
    pad = torch.zeros(2, 6, dtype=torch.bool)
    tgt_in = torch.randint(0, len(vocab), (2, 4))
    tgt_out = torch.randint(0, len(vocab), (2, 4))
    loss_fn = torch.nn.CrossEntropyLoss()

    def loss_value() -> torch.Tensor:
        logits = model(src, pad, tgt_in)
        return loss_fn(logits.reshape(-1, logits.shape[-1]),
                       tgt_out.reshape(-1))

    loss = loss_value()
    loss.backward()
    row = int(src[0, 0])  # an embedding row in active use
    grad = model.token_embed.weight.grad[row, 0].item()

    eps = 1e-6
    with torch.no_grad():
        model.token_embed.weight[row, 0] += eps
        up = loss_value().item()
        model.token_embed.weight[row, 0] -= 2 * eps
        down = loss_value().item()
        model.token_embed.weight[row, 0] += eps
    numeric = (up - down) / (2 * eps)
    assert grad == pytest.approx(numeric, rel=1e-3)
