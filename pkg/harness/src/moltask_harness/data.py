"""Corpus loading and batching for JSONL task examples."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import torch

from .vocab import Vocab


@dataclass
class Example:
    source_id: str
    task: str
    input_tokens: list[str]
    target_tokens: list[str]


def load_corpus(path) -> list[Example]:
    examples = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            examples.append(Example(
                source_id=row.get("source_id", ""),
                task=row.get("task", ""),
                input_tokens=row["input"].split(),
                target_tokens=row["target"].split(),
            ))
    if not examples:
        raise ValueError(f"{path}: empty corpus")
    return examples


def split_examples(examples, holdout_fraction: float, seed: int):
    """Random train/holdout split (seeded, order-independent)."""
    indices = list(range(len(examples)))
    random.Random(seed).shuffle(indices)
    n_holdout = max(1, int(len(examples) * holdout_fraction))
    held = frozenset(indices[:n_holdout])
    train = [ex for i, ex in enumerate(examples) if i not in held]
    holdout = [ex for i, ex in enumerate(examples) if i in held]
    return train, holdout


def _pad(rows: list[list[int]], pad_id: int) -> torch.Tensor:
    width = max(len(r) for r in rows)
    return torch.tensor(
        [r + [pad_id] * (width - len(r)) for r in rows], dtype=torch.long
    )


@dataclass
class Batch:
    src: torch.Tensor        # [batch, src_len]
    src_pad: torch.Tensor    # [batch, src_len] bool
    tgt_in: torch.Tensor     # [batch, tgt_len]
    tgt_out: torch.Tensor    # [batch, tgt_len]

    def to(self, device) -> "Batch":
        return Batch(*(t.to(device) for t in
                       (self.src, self.src_pad, self.tgt_in, self.tgt_out)))


def make_batch(examples, vocab: Vocab, max_src: int = 120,
               max_tgt: int = 48) -> Batch:
    src_rows, in_rows, out_rows = [], [], []
    for ex in examples:
        src = vocab.encode(ex.input_tokens)[:max_src]
        tgt = vocab.encode(ex.target_tokens)[:max_tgt - 1]
        src_rows.append(src)
        in_rows.append([vocab.bos_id] + tgt)
        out_rows.append(tgt + [vocab.eos_id])
    src = _pad(src_rows, vocab.pad_id)
    return Batch(
        src=src,
        src_pad=src.eq(vocab.pad_id),
        tgt_in=_pad(in_rows, vocab.pad_id),
        tgt_out=_pad(out_rows, vocab.pad_id),
    )


def iter_batches(examples, vocab: Vocab, batch_size: int, seed: int,
                 shuffle: bool = True):
    order = list(range(len(examples)))
    if shuffle:
        random.Random(seed).shuffle(order)
    for start in range(0, len(order), batch_size):
        chunk = [examples[i] for i in order[start:start + batch_size]]
        yield make_batch(chunk, vocab)
