"""Deterministic toy-molecule generator for harness tests.

Molecules are ring templates with one or two decoration slots; the
combination space is large enough to sample thousands of distinct
molecules, so held-out examples are genuinely unseen."""

from __future__ import annotations

import itertools
import random

RINGS = [
    "c1cc({0})cc({1})c1",
    "c1cc({0})nc({1})c1",
    "c1c({0})cc({1})s1",
    "c1cc({0})c({1})o1",
    "c1cc({0})c({1})[nH]1",
    "C1CC({0})CC({1})C1",
    "C1CC({0})N({1})CC1",
    "c1ccc2cc({0})c({1})cc2c1",
]

BASE_DECORATIONS = [
    "C", "CC", "O", "N", "C(=O)O", "C(=O)OC", "C#N", "Cl", "CO",
    "C(=O)N", "N(C)C", "C=C",
]

CHAINS = ["", "C", "CC"]

DECORATIONS = [c + d for c in CHAINS for d in BASE_DECORATIONS]


def enumerate_space() -> list[str]:
    return [
        ring.format(a, b)
        for ring, a, b in itertools.product(RINGS, DECORATIONS, DECORATIONS)
    ]


def sample_molecules(n: int, seed: int = 0) -> list[str]:
    space = enumerate_space()
    if n > len(space):
        raise ValueError(f"only {len(space)} distinct molecules available")
    rng = random.Random(seed)
    return rng.sample(space, n)
