"""Tokenization of SMILES and task strings into space-separated streams.

Longest-match over: bracket atoms as one token, two-letter organic
symbols (Cl/Br), ``%nn`` ring closures, sentinel tokens
``<extra_id_N>``, task prefixes (``scaffold:``, ``fragments:``,
``labels:``), fragment names (``fr_``...), and single characters for
everything else.  Joining tokens with single spaces and re-tokenizing
yields the identical list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = ["TokenSequence", "tokenize", "detokenize", "sentinel_token",
           "SENTINEL_RE", "TASK_PREFIXES"]

TASK_PREFIXES = ("scaffold:", "fragments:", "labels:")

SENTINEL_RE = re.compile(r"<extra_id_(\d+)>")

_TOKEN_RE = re.compile(
    r"\[[^\]]*\]"
    r"|<extra_id_\d+>"
    r"|(?:scaffold|fragments|labels):"
    r"|fr_\w+"
    r"|%\d{2}"
    r"|Cl|Br"
    r"|."
)

# Single characters that legitimately occur in SMILES text; anything
# else is kept as a one-character token but flagged as unknown.
_KNOWN_SINGLE = set("BCNOPSFIbcnops0123456789()=#:./\\+-*@")


def sentinel_token(n: int) -> str:
    return f"<extra_id_{n}>"


@dataclass(frozen=True)
class TokenSequence:
    """An ordered token list plus diagnostics for unknown characters."""

    tokens: tuple[str, ...]
    unknown: tuple[str, ...] = field(default=(), compare=False)

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def text(self) -> str:
        return " ".join(self.tokens)


def tokenize(text: str, extra_tokens: tuple[str, ...] = ()) -> TokenSequence:
    """Split text into tokens.

    ``extra_tokens`` lists dataset-specific words (e.g. label tokens)
    that must survive as single tokens; they are matched against whole
    whitespace-delimited words only.
    """
    extras = set(extra_tokens)
    tokens: list[str] = []
    unknown: list[str] = []
    for word in text.split():
        if word in extras:
            tokens.append(word)
            continue
        for tok in _TOKEN_RE.findall(word):
            tokens.append(tok)
            if len(tok) == 1 and tok not in _KNOWN_SINGLE:
                unknown.append(tok)
    return TokenSequence(tuple(tokens), tuple(unknown))


def detokenize(tokens) -> str:
    """Inverse of :func:`tokenize` for already-tokenized streams."""
    return " ".join(tokens)
