"""Corpus loading, vocabulary, batching, and the holdout split."""

import torch

from moltask_harness import Vocab, load_corpus, make_batch, split_examples
from moltask_harness.data import iter_batches
from moltask_harness.vocab import is_special_for_pooling


def test_load_corpus(tiny_corpus):
    examples = load_corpus(tiny_corpus)
    assert len(examples) == 400  # combined: two per molecule
    tasks = {ex.task for ex in examples}
    assert tasks == {"scaffold", "fragments"}
    assert all(ex.input_tokens[0] in ("scaffold:", "fragments:")
               for ex in examples)


def test_vocab_round_trip(tiny_corpus):
    examples = load_corpus(tiny_corpus)
    vocab = Vocab.build(
        [" ".join(ex.input_tokens + ex.target_tokens) for ex in examples]
    )
    for ex in examples[:20]:
        ids = vocab.encode(ex.input_tokens)
        assert vocab.unk_id not in ids
        assert vocab.decode(ids) == ex.input_tokens


def test_vocab_contains_task_and_fragment_tokens(tiny_corpus):
    examples = load_corpus(tiny_corpus)
    vocab = Vocab.build(
        [" ".join(ex.input_tokens + ex.target_tokens) for ex in examples]
    )
    assert "scaffold:" in vocab.index
    assert "fragments:" in vocab.index
    assert any(tok.startswith("fr_") for tok in vocab.tokens)


def test_pooling_special_set():
    assert is_special_for_pooling("<pad>")
    assert is_special_for_pooling("</s>")
    assert is_special_for_pooling("<extra_id_3>")
    assert is_special_for_pooling("scaffold:")
    assert not is_special_for_pooling("C")
    assert not is_special_for_pooling("fr_ester")


def test_batch_shapes(tiny_corpus):
    examples = load_corpus(tiny_corpus)[:7]
    vocab = Vocab.build(
        [" ".join(ex.input_tokens + ex.target_tokens) for ex in examples]
    )
    batch = make_batch(examples, vocab)
    assert batch.src.shape[0] == 7
    assert batch.src_pad.shape == batch.src.shape
    assert batch.tgt_in.shape == batch.tgt_out.shape
    # decoder input begins with BOS, output ends each row with EOS+pads
    assert torch.all(batch.tgt_in[:, 0] == vocab.bos_id)
    for row_in, row_out in zip(batch.tgt_in.tolist(), batch.tgt_out.tolist()):
        content = [t for t in row_out if t != vocab.pad_id]
        assert content[-1] == vocab.eos_id
        assert row_in[1:len(content)] == content[:-1]


def test_empty_target_batches():
    vocab = Vocab.build(["C C O"])
    from moltask_harness.data import Example

    batch = make_batch([Example("x", "t", ["C"], [])], vocab)
    assert batch.tgt_in.tolist() == [[vocab.bos_id]]
    assert batch.tgt_out.tolist() == [[vocab.eos_id]]


def test_split_examples_disjoint_and_seeded(tiny_corpus):
    examples = load_corpus(tiny_corpus)
    train_a, held_a = split_examples(examples, 0.1, seed=3)
    train_b, held_b = split_examples(examples, 0.1, seed=3)
    assert len(held_a) == int(len(examples) * 0.1)
    assert len(train_a) + len(held_a) == len(examples)
    assert [e.source_id for e in held_a] == [e.source_id for e in held_b]
    _, held_c = split_examples(examples, 0.1, seed=4)
    assert [e.source_id for e in held_a] != [e.source_id for e in held_c]


def test_iter_batches_covers_everything(tiny_corpus):
    examples = load_corpus(tiny_corpus)[:50]
    vocab = Vocab.build(
        [" ".join(ex.input_tokens + ex.target_tokens) for ex in examples]
    )
    seen = 0
    for batch in iter_batches(examples, vocab, batch_size=16, seed=0):
        seen += batch.src.shape[0]
    assert seen == 50
