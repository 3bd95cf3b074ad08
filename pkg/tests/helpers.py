"""Shared test utilities: a deterministic SMILES corpus generator and an
independent graph-isomorphism oracle built on networkx."""

from __future__ import annotations

import random

import networkx as nx
from networkx.algorithms import isomorphism as nxiso

from moltask.mol import Molecule

# Scaffold templates with substitution slots.  Every template stays a
# valid SMILES for any decoration drawn from DECORATIONS.
TEMPLATES = [
    "c1ccc({0})cc1",
    "c1cc({0})ccc1{1}",
    "c1ccc({0})c({1})c1",
    "c1ccc2cc({0})ccc2c1",
    "c1cc({0})cnc1",
    "c1cc({0})sc1",
    "c1cc({0})oc1",
    "c1cc({0})[nH]c1",
    "c1nc({0})c[nH]1",
    "C1CCC({0})CC1",
    "C1CCN({0})CC1",
    "N1CCN({0})CC1",
    "O1CCN({0})CC1",
    "c1ccc(-c2ccc({0})cc2)cc1",
    "c1ccc(C(=O)Nc2ccc({0})cc2)cc1",
    "c1ccc(Cc2ccc({0})cc2)cc1",
    "c1ccc(COc2ccc({0})cc2)cc1",
    "c1ccc2[nH]c({0})cc2c1",
    "C1CC2CCC1C2",
    "c1ccc(S(=O)(=O)Nc2ccc({0})cc2)cc1",
    "C%11CCCC({0})C%11",
    "CC({0})CC",
    "CCOC({0})C",
    "CC(=O)OC({0})C",
    "CCCCC({0})C",
]

DECORATIONS = [
    "C", "CC", "C(C)C", "O", "OC", "OCC", "N", "NC", "N(C)C",
    "C(=O)O", "C(=O)OC", "C(=O)N", "C(=O)NC", "C#N", "C=C", "CO",
    "CCO", "F", "Cl", "Br", "I", "S", "SC", "S(=O)(=O)N",
    "NC(=O)C", "OC(=O)C", "[N+](=O)[O-]", "C(F)(F)F", "NN", "N=NC",
    "NC(=N)N", "C(=O)", "C#C", "CN(C)C", "CCCC",
]

SALTS = [".[Na+]", ".[Cl-]", ".[K+]"]


def random_smiles(rng: random.Random) -> str:
    template = rng.choice(TEMPLATES)
    n_slots = template.count("{")
    smiles = template.format(
        *[rng.choice(DECORATIONS) for _ in range(n_slots)]
    )
    if rng.random() < 0.05:
        smiles += rng.choice(SALTS)
    return smiles


def corpus(n: int, seed: int = 7) -> list[str]:
    rng = random.Random(seed)
    return [random_smiles(rng) for _ in range(n)]


# Ring menus for benchmark-scale datasets: containers carry one slot,
# substituent forms attach through their first atom (digits 8/9 avoid
# collisions with container digits).
RING_CONTAINERS = [
    "c1ccc({0})cc1",
    "c1ccc({0})nc1",
    "c1ncc({0})cn1",
    "c1cc({0})cs1",
    "c1cc({0})co1",
    "c1cc({0})c[nH]1",
    "C1CCC({0})CC1",
    "C1CCN({0})CC1",
    "C1CC({0})CO1",
    "C1CCC({0})C1",
    "c1ccc2cc({0})ccc2c1",
    "c1cc({0})c2[nH]ccc2c1",
]

RING_SUBSTITUENTS = [
    "c9ccccc9",
    "c9ccncc9",
    "c9cccs9",
    "c9ccco9",
    "c9cc[nH]c9",
    "C9CCCCC9",
    "N9CCCCC9",
    "c9ccc8ccccc8c9",
]

LINKERS = ["", "C", "CC", "CCC", "O", "N", "OC", "C(=O)N", "S", "C(=O)"]


def bbbp_like(n: int, seed: int = 0) -> list[tuple[str, str]]:
    """(source_id, smiles) rows shaped like a small benchmark dataset:
    many distinct scaffolds, no group dominating."""
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        if rng.random() < 0.15:
            template = rng.choice(RING_CONTAINERS)
            smiles = template.format(rng.choice(DECORATIONS))
        else:
            container = rng.choice(RING_CONTAINERS)
            sub = rng.choice(RING_SUBSTITUENTS)
            linker = rng.choice(LINKERS)
            smiles = container.format(linker + sub)
        rows.append((f"mol{i}", smiles))
    return rows


def to_networkx(mol: Molecule) -> nx.Graph:
    g = nx.Graph()
    for i, atom in enumerate(mol.atoms):
        g.add_node(
            i,
            element=atom.element,
            aromatic=atom.aromatic,
            charge=atom.formal_charge,
            hydrogens=mol.implicit_h(i),
        )
    for bond in mol.bonds:
        g.add_edge(bond.a, bond.b, order=bond.order)
    return g


_NODE_MATCH = nxiso.categorical_node_match(
    ["element", "aromatic", "charge", "hydrogens"], [None, None, None, None]
)
_EDGE_MATCH = nxiso.categorical_edge_match("order", None)


def isomorphic(a: Molecule, b: Molecule) -> bool:
    """Element/aromatic/charge/hydrogen/bond-order preserving isomorphism,
    decided by networkx (independent of the package's own matcher)."""
    ga, gb = to_networkx(a), to_networkx(b)
    return nxiso.GraphMatcher(
        ga, gb, node_match=_NODE_MATCH, edge_match=_EDGE_MATCH
    ).is_isomorphic()
