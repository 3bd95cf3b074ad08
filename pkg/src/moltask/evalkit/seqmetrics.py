"""Corpus-level sequence metrics: BLEU, word error rate, exact match."""

from __future__ import annotations

import math
from collections import Counter

__all__ = ["corpus_bleu", "word_error_rate", "exact_match_accuracy"]

_EPSILON = 1e-9


def _ngrams(tokens, order: int) -> Counter:
    return Counter(
        tuple(tokens[i:i + order]) for i in range(len(tokens) - order + 1)
    )


def corpus_bleu(candidates, references, max_order: int = 4,
                epsilon: float = _EPSILON) -> float:
    """Corpus BLEU with uniform n-gram weights and a brevity penalty.

    N-gram counts aggregate over the whole corpus.  Orders with zero
    clipped matches get ``epsilon`` precision; orders that never fit any
    candidate are dropped (so equal corpora score exactly 1.0 even for
    very short sequences).
    """
    if len(candidates) != len(references):
        raise ValueError("candidates and references must pair up")
    if not candidates:
        raise ValueError("empty corpus")
    matches = [0] * max_order
    totals = [0] * max_order
    cand_len = 0
    ref_len = 0
    for cand, ref in zip(candidates, references):
        cand = list(cand)
        ref = list(ref)
        cand_len += len(cand)
        ref_len += len(ref)
        for n in range(1, max_order + 1):
            if len(cand) < n:
                break
            cand_counts = _ngrams(cand, n)
            ref_counts = _ngrams(ref, n)
            totals[n - 1] += sum(cand_counts.values())
            matches[n - 1] += sum(
                min(count, ref_counts.get(gram, 0))
                for gram, count in cand_counts.items()
            )
    if cand_len == 0:
        return 0.0
    log_sum = 0.0
    orders = 0
    for n in range(max_order):
        if totals[n] == 0:
            continue
        precision = matches[n] / totals[n] if matches[n] else epsilon
        log_sum += math.log(precision)
        orders += 1
    if orders == 0:
        return 0.0
    geo_mean = math.exp(log_sum / orders)
    brevity = 1.0 if cand_len >= ref_len else math.exp(1.0 - ref_len / cand_len)
    return brevity * geo_mean


def _levenshtein(a, b) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (x != y),
            ))
        prev = cur
    return prev[-1]


def word_error_rate(candidates, references) -> float:
    """Token-level edit distance summed over pairs, normalized by the
    total reference token count.  Can exceed 1 (insertions)."""
    if len(candidates) != len(references):
        raise ValueError("candidates and references must pair up")
    total_ref = sum(len(list(r)) for r in references)
    if total_ref == 0:
        raise ValueError("references contain no tokens")
    distance = sum(
        _levenshtein(list(c), list(r))
        for c, r in zip(candidates, references)
    )
    return distance / total_ref


def exact_match_accuracy(candidates, references) -> float:
    """Fraction of byte-identical candidate/reference text pairs.

    Token lists are joined with single spaces before comparison.
    """
    if len(candidates) != len(references):
        raise ValueError("candidates and references must pair up")
    if not candidates:
        raise ValueError("empty corpus")

    def as_text(x) -> str:
        return x if isinstance(x, str) else " ".join(x)

    hits = sum(
        as_text(c) == as_text(r) for c, r in zip(candidates, references)
    )
    return hits / len(candidates)
