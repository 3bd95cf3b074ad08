"""A small encoder-decoder transformer with a language-model head."""

from __future__ import annotations

from dataclasses import dataclass, asdict

import torch
from torch import nn


@dataclass(frozen=True)
class ModelShape:
    """Architecture hyperparameters; presets mirror the published model
    size table, plus an unconstrained desk-scale ``toy``."""

    embedding_size: int
    num_layers: int
    num_heads: int
    feed_forward_size: int
    preset: str = "toy"

    PRESETS = {
        "small": (512, 6, 8, 2048),
        "base": (768, 12, 12, 3072),
        "xl": (1024, 24, 32, 16384),
        "toy": (64, 2, 4, 256),
    }

    @classmethod
    def from_preset(cls, name: str) -> "ModelShape":
        if name not in cls.PRESETS:
            raise ValueError(f"unknown preset {name!r}")
        d, layers, heads, ff = cls.PRESETS[name]
        return cls(d, layers, heads, ff, preset=name)

    def to_json(self) -> dict:
        return asdict(self)


class Seq2SeqModel(nn.Module):
    """Encoder-decoder over a shared token embedding, with learned
    positions and an untied linear language head."""

    def __init__(self, vocab_size: int, shape: ModelShape,
                 max_len: int = 256, dropout: float = 0.1):
        super().__init__()
        self.shape = shape
        self.max_len = max_len
        d = shape.embedding_size
        self.token_embed = nn.Embedding(vocab_size, d)
        self.pos_embed = nn.Embedding(max_len, d)
        self.drop = nn.Dropout(dropout)
        enc_layer = nn.TransformerEncoderLayer(
            d, shape.num_heads, shape.feed_forward_size, dropout,
            batch_first=True, norm_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            enc_layer, shape.num_layers, enable_nested_tensor=False
        )
        dec_layer = nn.TransformerDecoderLayer(
            d, shape.num_heads, shape.feed_forward_size, dropout,
            batch_first=True, norm_first=True,
        )
        self.decoder = nn.TransformerDecoder(dec_layer, shape.num_layers)
        self.encoder_norm = nn.LayerNorm(d)
        self.decoder_norm = nn.LayerNorm(d)
        self.lm_head = nn.Linear(d, vocab_size, bias=False)

    def _embed(self, ids: torch.Tensor) -> torch.Tensor:
        positions = torch.arange(ids.shape[1], device=ids.device)
        return self.drop(self.token_embed(ids) + self.pos_embed(positions))

    def encode(self, src: torch.Tensor, src_pad: torch.Tensor) -> torch.Tensor:
        """Final encoder hidden states, [batch, seq, embedding size]."""
        memory = self.encoder(
            self._embed(src), src_key_padding_mask=src_pad
        )
        memory = self.encoder_norm(memory)
        assert memory.shape == (*src.shape, self.shape.embedding_size)
        return memory

    def decode(self, tgt_in: torch.Tensor, memory: torch.Tensor,
               src_pad: torch.Tensor) -> torch.Tensor:
        """Language-head logits, [batch, seq, vocab size]."""
        seq = tgt_in.shape[1]
        causal = torch.triu(
            torch.ones(seq, seq, dtype=torch.bool, device=tgt_in.device),
            diagonal=1,
        )
        hidden = self.decoder(
            self._embed(tgt_in), memory, tgt_mask=causal,
            memory_key_padding_mask=src_pad,
        )
        logits = self.lm_head(self.decoder_norm(hidden))
        assert logits.shape == (*tgt_in.shape, self.lm_head.out_features)
        return logits

    def forward(self, src, src_pad, tgt_in):
        memory = self.encode(src, src_pad)
        return self.decode(tgt_in, memory, src_pad)

    @torch.no_grad()
    def greedy_decode(self, src: torch.Tensor, src_pad: torch.Tensor,
                      bos_id: int, eos_id: int,
                      max_steps: int = 32) -> tuple[torch.Tensor, torch.Tensor]:
        """Batched greedy decoding.

        Returns (token ids [batch, steps], logits [batch, steps, vocab]);
        positions after end-of-sequence keep decoding but are ignored by
        the caller via the returned ids.
        """
        self.eval()
        batch = src.shape[0]
        memory = self.encode(src, src_pad)
        ids = torch.full((batch, 1), bos_id, dtype=torch.long,
                         device=src.device)
        all_logits = []
        for _ in range(max_steps):
            logits = self.decode(ids, memory, src_pad)[:, -1, :]
            all_logits.append(logits)
            nxt = logits.argmax(dim=-1, keepdim=True)
            ids = torch.cat([ids, nxt], dim=1)
        return ids[:, 1:], torch.stack(all_logits, dim=1)
