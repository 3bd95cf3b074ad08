"""Logits and embedding export in the shared binary container format.

Layout (little-endian): 8-byte magic ``MOLTNSR1``, uint8 dtype code
(1 = float32, 2 = float64), uint8 ndim, 6 reserved bytes, ndim uint64
dimensions, row-major payload.  The JSON sidecar maps label names to
vocabulary token ids.  This mirrors the consumer's documented format;
the writer is implemented here independently so the two packages only
share the file contract.
"""

from __future__ import annotations

import json
import struct

import numpy as np
import torch

from .data import Example, make_batch
from .model import Seq2SeqModel
from .vocab import Vocab

MAGIC = b"MOLTNSR1"
_CODES = {np.dtype("float32"): 1, np.dtype("float64"): 2}


def write_container(path, array) -> None:
    array = np.asarray(array)
    code = _CODES.get(array.dtype)
    if code is None:
        array = array.astype(np.float32)
        code = 1
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<BB6x", code, array.ndim))
        fh.write(struct.pack(f"<{array.ndim}Q", *array.shape))
        fh.write(np.ascontiguousarray(array).tobytes())


def read_container(path) -> np.ndarray:
    dtypes = {1: np.dtype("<f4"), 2: np.dtype("<f8")}
    with open(path, "rb") as fh:
        if fh.read(8) != MAGIC:
            raise ValueError(f"{path}: bad magic")
        code, ndim = struct.unpack("<BB6x", fh.read(8))
        shape = struct.unpack(f"<{ndim}Q", fh.read(8 * ndim))
        data = np.frombuffer(fh.read(), dtype=dtypes[code])
    return data.reshape(shape).copy()


def write_label_sidecar(path, label_names, vocab: Vocab) -> None:
    ids = []
    for name in label_names:
        if name not in vocab.index:
            raise ValueError(f"label {name!r} is not in the vocabulary")
        ids.append(vocab.index[name])
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"labels": list(label_names), "token_ids": ids}, fh,
                  indent=2)
        fh.write("\n")


@torch.no_grad()
def export_logits(model: Seq2SeqModel, input_texts, vocab: Vocab,
                  path, device: str = "cpu", max_steps: int = 16,
                  batch_size: int = 256) -> np.ndarray:
    """Greedy-decode language-head logits, [batch, steps, vocab]."""
    model.eval()
    blocks = []
    examples = [Example("", "", text.split(), []) for text in input_texts]
    for start in range(0, len(examples), batch_size):
        batch = make_batch(examples[start:start + batch_size], vocab)
        src = batch.src.to(device)
        src_pad = batch.src_pad.to(device)
        _, logits = model.greedy_decode(
            src, src_pad, vocab.bos_id, vocab.eos_id, max_steps=max_steps
        )
        blocks.append(logits.cpu().numpy().astype(np.float32))
    tensor = np.concatenate(blocks, axis=0)
    write_container(path, tensor)
    return tensor
