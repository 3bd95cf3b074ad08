"""Matching semantics against an independent networkx monomorphism oracle."""

import networkx as nx
from networkx.algorithms import isomorphism as nxiso

from moltask.matching import match_count
from moltask.mol import AROMATIC, DOUBLE, SINGLE, TRIPLE
from moltask.parser import parse_smiles
from moltask.smarts import parse_smarts

from helpers import to_networkx

# Plain structural patterns whose node/edge predicates we can restate
# independently for networkx: (smarts, [(element, aromatic)], [(i, j, order)])
_PLAIN_PATTERNS = [
    ("C=O", [("C", False), ("O", False)], [(0, 1, DOUBLE)]),
    ("CCO", [("C", False), ("C", False), ("O", False)],
     [(0, 1, SINGLE), (1, 2, SINGLE)]),
    ("C=C", [("C", False), ("C", False)], [(0, 1, DOUBLE)]),
    ("C#N", [("C", False), ("N", False)], [(0, 1, TRIPLE)]),
    ("c1ccccc1", [("C", True)] * 6,
     [(i, (i + 1) % 6, AROMATIC) for i in range(6)]),
    ("c1ccncc1", [("C", True)] * 3 + [("N", True)] + [("C", True)] * 2,
     [(i, (i + 1) % 6, AROMATIC) for i in range(6)]),
    ("NC=O", [("N", False), ("C", False), ("O", False)],
     [(0, 1, SINGLE), (1, 2, DOUBLE)]),
    ("OCCO", [("O", False), ("C", False), ("C", False), ("O", False)],
     [(0, 1, SINGLE), (1, 2, SINGLE), (2, 3, SINGLE)]),
]


def _nx_pattern(nodes, edges) -> nx.Graph:
    g = nx.Graph()
    for i, (element, aromatic) in enumerate(nodes):
        g.add_node(i, element=element, aromatic=aromatic)
    for i, j, order in edges:
        g.add_edge(i, j, order=order)
    return g


def _nx_match_count(mol, nodes, edges) -> int:
    """Distinct matched atom sets via networkx subgraph monomorphism.

    The default single bond also matches aromatic bonds, mirroring
    SMARTS default-bond semantics.
    """
    target = to_networkx(mol)
    pattern = _nx_pattern(nodes, edges)

    def node_match(t, p):
        return t["element"] == p["element"] and t["aromatic"] == p["aromatic"]

    def edge_match(t, p):
        if p["order"] == SINGLE:
            return t["order"] in (SINGLE, AROMATIC)
        return t["order"] == p["order"]

    matcher = nxiso.GraphMatcher(
        target, pattern, node_match=node_match, edge_match=edge_match
    )
    seen = set()
    for mapping in matcher.subgraph_monomorphisms_iter():
        seen.add(frozenset(mapping))
    return len(seen)


def test_plain_patterns_match_networkx_oracle(corpus_300):
    pats = [(parse_smarts(s), nodes, edges) for s, nodes, edges in _PLAIN_PATTERNS]
    checked = 0
    for smiles in corpus_300:
        mol = parse_smiles(smiles)
        for pat, nodes, edges in pats:
            ours = match_count(mol, pat)
            theirs = _nx_match_count(mol, nodes, edges)
            assert ours == theirs, (smiles, pat.smarts, ours, theirs)
            checked += 1
    assert checked == len(_PLAIN_PATTERNS) * len(corpus_300)


def test_handcounted_aspirin():
    aspirin = parse_smiles("CC(=O)Oc1ccccc1C(=O)O")
    assert match_count(aspirin, parse_smarts("[CX3]=[OX1]")) == 2
    assert match_count(aspirin, parse_smarts("c1ccccc1")) == 1
    assert match_count(aspirin, parse_smarts("[OD2]([#6])[#6]")) == 1


def test_handcounted_misc():
    assert match_count(parse_smiles("C"), parse_smarts("c1ccccc1")) == 0
    assert match_count(parse_smiles("c1ccc2ccccc2c1"),
                       parse_smarts("c1ccccc1")) == 2
    # cyclopropane contains three CCC paths as one atom set (monomorphism)
    assert match_count(parse_smiles("C1CC1"), parse_smarts("CCC")) == 1
    assert match_count(parse_smiles("CCCC"), parse_smarts("CCC")) == 2


def test_determinism_across_runs(corpus_300):
    pat = parse_smarts("[$([CX3](=O)[OX2H0])]")
    counts1 = [match_count(parse_smiles(s), pat) for s in corpus_300[:50]]
    counts2 = [match_count(parse_smiles(s), pat) for s in corpus_300[:50]]
    assert counts1 == counts2
