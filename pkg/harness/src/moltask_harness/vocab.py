"""Token vocabulary shared by the encoder and decoder.

Built from a corpus so every input/target token (including task
prefixes, sentinels, fragment names, and label tokens) gets an id.
Special tokens cover padding, sequence boundaries, and unknowns; the
pooling exclusion set additionally treats sentinels and task prefixes
as special.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

PAD, BOS, EOS, UNK = "<pad>", "<s>", "</s>", "<unk>"
SPECIALS = (PAD, BOS, EOS, UNK)

_SENTINEL = re.compile(r"<extra_id_\d+>")
_PREFIXES = ("scaffold:", "fragments:", "labels:")


def is_special_for_pooling(token: str) -> bool:
    """Tokens excluded from mean pooling: padding, boundaries, unknowns,
    sentinels, and task prefixes."""
    return (
        token in SPECIALS
        or token in _PREFIXES
        or _SENTINEL.fullmatch(token) is not None
    )


@dataclass
class Vocab:
    tokens: tuple[str, ...]

    def __post_init__(self):
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        self.pad_id = self.index[PAD]
        self.bos_id = self.index[BOS]
        self.eos_id = self.index[EOS]
        self.unk_id = self.index[UNK]
        self.pooling_special_ids = frozenset(
            i for i, tok in enumerate(self.tokens)
            if is_special_for_pooling(tok)
        )

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, words) -> list[int]:
        return [self.index.get(w, self.unk_id) for w in words]

    def decode(self, ids) -> list[str]:
        out = []
        for i in ids:
            tok = self.tokens[i]
            if tok == EOS:
                break
            if tok in (PAD, BOS):
                continue
            out.append(tok)
        return out

    @classmethod
    def build(cls, texts) -> "Vocab":
        seen: set[str] = set()
        for text in texts:
            seen.update(text.split())
        ordered = SPECIALS + tuple(sorted(seen - set(SPECIALS)))
        return cls(ordered)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(list(self.tokens), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Vocab":
        with open(path, encoding="utf-8") as fh:
            return cls(tuple(json.load(fh)))
