"""Mean-pooled sequence embeddings from the encoder.

Each molecule's SMILES token stream runs through the encoder; the final
hidden states are averaged over non-special token positions (padding,
boundaries, sentinels, and task prefixes are excluded), giving one
vector of the model's embedding size per molecule.
"""

from __future__ import annotations

import numpy as np
import torch

from .data import Example, make_batch
from .model import Seq2SeqModel
from .vocab import Vocab


@torch.no_grad()
def embed_token_lists(model: Seq2SeqModel, token_lists, vocab: Vocab,
                      device: str = "cpu", batch_size: int = 256) -> np.ndarray:
    """[n, embedding size] pooled embeddings for tokenized inputs."""
    model.eval()
    special = torch.tensor(
        sorted(vocab.pooling_special_ids), dtype=torch.long, device=device
    )
    out = []
    examples = [Example("", "", list(toks), []) for toks in token_lists]
    for start in range(0, len(examples), batch_size):
        batch = make_batch(examples[start:start + batch_size], vocab)
        src = batch.src.to(device)
        src_pad = batch.src_pad.to(device)
        hidden = model.encode(src, src_pad)  # [b, seq, d]
        keep = ~src_pad & ~torch.isin(src, special)
        weights = keep.unsqueeze(-1).to(hidden.dtype)
        denom = weights.sum(dim=1).clamp(min=1.0)
        pooled = (hidden * weights).sum(dim=1) / denom
        out.append(pooled.cpu().numpy())
    return np.concatenate(out, axis=0)


def embed_smiles(model: Seq2SeqModel, smiles_token_texts, vocab: Vocab,
                 device: str = "cpu") -> np.ndarray:
    """Convenience wrapper over whitespace-tokenized input lines."""
    return embed_token_lists(
        model, [text.split() for text in smiles_token_texts], vocab, device
    )
