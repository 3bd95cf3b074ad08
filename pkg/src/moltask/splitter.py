"""Seeded scaffold splitting with no scaffold leakage between folds.

Records are grouped by scaffold key (acyclic molecules share the empty
key), groups are ordered either by a seeded shuffle (default) or by
decreasing size, and whole groups are assigned greedily: train until the
cumulative count reaches the train fraction, then valid, remainder test.
All records sharing a scaffold therefore land in the same fold.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .scaffold import scaffold_key

__all__ = ["SplitAssignment", "scaffold_split", "FOLDS"]

FOLDS = ("train", "valid", "test")


@dataclass
class SplitAssignment:
    seed: int
    fractions: tuple[float, float, float]
    assignment: dict  # source_id -> fold
    group_table: dict  # scaffold key -> fold
    excluded: list = field(default_factory=list)  # unparseable records
    warnings: list = field(default_factory=list)

    def fold_counts(self) -> dict:
        counts = {f: 0 for f in FOLDS}
        for fold in self.assignment.values():
            counts[fold] += 1
        return counts


def scaffold_split(records, fractions=(0.8, 0.1, 0.1), seed: int = 0,
                   ordering: str = "shuffle",
                   key_fn=scaffold_key) -> SplitAssignment:
    """Assign records to train/valid/test folds by whole scaffold groups.

    Args:
        records: iterable of ``(source_id, smiles)`` pairs.
        fractions: positive (train, valid, test) fractions summing to 1.
        seed: group shuffle seed (``ordering="shuffle"``).
        ordering: ``"shuffle"`` (seeded, the default) or ``"size"``
            (deterministic largest-group-first).
        key_fn: grouping key function, ``scaffold_key`` by default.
    """
    if len(fractions) != 3 or any(f <= 0 for f in fractions):
        raise ValueError("fractions must be three positive numbers")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    if ordering not in ("shuffle", "size"):
        raise ValueError("ordering must be 'shuffle' or 'size'")

    groups: dict[str, list[str]] = {}
    order_of_key: dict[str, int] = {}
    excluded = []
    for source_id, smiles in records:
        try:
            key = key_fn(smiles)
        except Exception as exc:
            excluded.append({"source_id": source_id, "error": str(exc)})
            continue
        if key not in groups:
            order_of_key[key] = len(order_of_key)
            groups[key] = []
        groups[key].append(source_id)

    keys = sorted(groups, key=order_of_key.__getitem__)
    if ordering == "shuffle":
        rng = random.Random(seed)
        rng.shuffle(keys)
    else:
        keys.sort(key=lambda k: (-len(groups[k]), order_of_key[k]))

    n = sum(len(g) for g in groups.values())
    train_target = fractions[0] * n
    valid_target = (fractions[0] + fractions[1]) * n

    assignment: dict[str, str] = {}
    group_table: dict[str, str] = {}
    warnings: list[str] = []
    cumulative = 0
    for key in keys:
        members = groups[key]
        if cumulative < train_target:
            fold = "train"
            if len(members) > train_target:
                warnings.append(
                    f"scaffold group of size {len(members)} exceeds the "
                    f"train capacity {train_target:.1f}; fractions degrade"
                )
        elif cumulative < valid_target:
            fold = "valid"
        else:
            fold = "test"
        cumulative += len(members)
        group_table[key] = fold
        for source_id in members:
            assignment[source_id] = fold
    counts = {f: 0 for f in FOLDS}
    for fold in assignment.values():
        counts[fold] += 1
    if n and (counts["valid"] == 0 or counts["test"] == 0):
        warnings.append(
            "a fold is empty; too few scaffold groups for the fractions"
        )
    return SplitAssignment(
        seed=seed,
        fractions=tuple(fractions),
        assignment=assignment,
        group_table=group_table,
        excluded=excluded,
        warnings=warnings,
    )
