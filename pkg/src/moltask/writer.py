"""Deterministic SMILES writer.

Atoms are ranked by iterative neighborhood refinement over the invariants
(element, degree, charge, aromatic flag) with ties broken by input atom
index; emission is a depth-first traversal from the lowest-ranked atom of
each component.  Identical molecules always produce byte-identical
output, and the output re-parses to an isomorphic graph.
"""

from __future__ import annotations

import sys

from .mol import (
    AROMATIC, DEFAULT_VALENCES, DOUBLE, ORGANIC_SUBSET, TRIPLE, Molecule,
)

__all__ = ["write_smiles", "canonical_ranks"]

_BARE_AROMATIC = frozenset({"B", "C", "N", "O", "P", "S"})


def canonical_ranks(mol: Molecule) -> list[int]:
    """Stable atom ranks from Morgan-style iterative refinement."""
    n = len(mol.atoms)
    if n == 0:
        return []
    invariants = [
        (a.element, mol.degree(i), a.formal_charge, a.aromatic)
        for i, a in enumerate(mol.atoms)
    ]
    order = sorted(range(n), key=lambda i: invariants[i])
    ranks = [0] * n
    r = 0
    for k, i in enumerate(order):
        if k and invariants[i] != invariants[order[k - 1]]:
            r += 1
        ranks[i] = r
    distinct = r + 1
    for _ in range(n):
        keys = [
            (ranks[i], tuple(sorted(ranks[v] for v, _ in mol.neighbors(i))))
            for i in range(n)
        ]
        order = sorted(range(n), key=lambda i: keys[i])
        new_ranks = [0] * n
        r = 0
        for k, i in enumerate(order):
            if k and keys[i] != keys[order[k - 1]]:
                r += 1
            new_ranks[i] = r
        if r + 1 == distinct:
            break
        ranks = new_ranks
        distinct = r + 1
    return ranks


def _inferred_bare_h(mol: Molecule, idx: int) -> int:
    """Hydrogen count a reader would infer for a bracket-free atom."""
    atom = mol.atoms[idx]
    if atom.element not in DEFAULT_VALENCES:
        return 0
    if atom.aromatic:
        return mol._aromatic_h(idx, atom)
    s = int(mol.bond_order_sum(idx))
    for v in DEFAULT_VALENCES[atom.element]:
        if v >= s:
            return v - s
    return 0


def _atom_text(mol: Molecule, idx: int) -> str:
    atom = mol.atoms[idx]
    symbol = atom.element.lower() if atom.aromatic else atom.element
    h = mol.implicit_h(idx)
    bare_ok = (
        atom.isotope is None
        and atom.chirality is None
        and atom.formal_charge == 0
        and (
            (not atom.aromatic and atom.element in ORGANIC_SUBSET)
            or (atom.aromatic and atom.element in _BARE_AROMATIC)
        )
    )
    if bare_ok and (atom.explicit_h is None or h == _inferred_bare_h(mol, idx)):
        return symbol
    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(symbol)
    if atom.chirality:
        parts.append(atom.chirality)
    if h == 1:
        parts.append("H")
    elif h > 1:
        parts.append(f"H{h}")
    c = atom.formal_charge
    if c == 1:
        parts.append("+")
    elif c == -1:
        parts.append("-")
    elif c > 1:
        parts.append(f"+{c}")
    elif c < -1:
        parts.append(str(c))
    parts.append("]")
    return "".join(parts)


def _bond_text(mol: Molecule, bidx: int) -> str:
    bond = mol.bonds[bidx]
    if bond.order == DOUBLE:
        return "="
    if bond.order == TRIPLE:
        return "#"
    if bond.order == AROMATIC:
        return ""
    if bond.direction:
        return bond.direction
    # A plain single bond between two aromatic atoms (e.g. biphenyl)
    # must be written explicitly or it would re-parse as aromatic.
    if mol.atoms[bond.a].aromatic and mol.atoms[bond.b].aromatic:
        return "-"
    return ""


def _digit_text(d: int) -> str:
    return str(d) if d < 10 else f"%{d:02d}"


def write_smiles(mol: Molecule) -> str:
    """Serialize a molecule to a deterministic SMILES string."""
    n = len(mol.atoms)
    if n == 0:
        return ""
    ranks = canonical_ranks(mol)
    key = [(ranks[i], i) for i in range(n)]

    visited = [False] * n
    parent_bond = [-1] * n
    closure_bonds: list[list[int]] = [[] for _ in range(n)]
    seen_bonds: set[int] = set()

    def classify(u: int, pbond: int) -> None:
        visited[u] = True
        parent_bond[u] = pbond
        for v, bidx in sorted(mol.neighbors(u), key=lambda nb: key[nb[0]]):
            if bidx in seen_bonds:
                continue
            seen_bonds.add(bidx)
            if visited[v]:
                closure_bonds[u].append(bidx)
                closure_bonds[v].append(bidx)
            else:
                classify(v, bidx)

    digit_of: dict[int, int] = {}
    free_digits = list(range(99, 0, -1))

    def emit(u: int, via_bond: int) -> str:
        out = []
        if via_bond >= 0:
            out.append(_bond_text(mol, via_bond))
        out.append(_atom_text(mol, u))
        for bidx in sorted(
            closure_bonds[u],
            key=lambda b: (key[mol.bonds[b].other(u)], b),
        ):
            if bidx in digit_of:
                d = digit_of.pop(bidx)
                out.append(_digit_text(d))
                free_digits.append(d)
                free_digits.sort(reverse=True)
            else:
                d = free_digits.pop()
                digit_of[bidx] = d
                out.append(_bond_text(mol, bidx))
                out.append(_digit_text(d))
        children = sorted(
            (
                (v, bidx)
                for v, bidx in mol.neighbors(u)
                if parent_bond[v] == bidx
            ),
            key=lambda nb: key[nb[0]],
        )
        for k, (v, bidx) in enumerate(children):
            if k < len(children) - 1:
                out.append("(")
                out.append(emit(v, bidx))
                out.append(")")
            else:
                out.append(emit(v, bidx))
        return "".join(out)

    limit = sys.getrecursionlimit()
    if n + 100 > limit:
        sys.setrecursionlimit(n * 2 + 200)
    try:
        pieces: list[tuple[tuple[int, int], str]] = []
        for start in sorted(range(n), key=lambda i: key[i]):
            if visited[start]:
                continue
            classify(start, -1)
            pieces.append((key[start], emit(start, -1)))
    finally:
        sys.setrecursionlimit(limit)
    pieces.sort()
    return ".".join(text for _, text in pieces)
