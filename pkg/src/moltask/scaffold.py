"""Murcko scaffolds: ring systems plus the linkers connecting them.

The scaffold atom set is the union of all ring atoms, every atom on a
simple path between ring atoms of different ring systems, and atoms
attached to the set by a double or triple bond.  Acyclic molecules have
an empty scaffold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mol import DOUBLE, TRIPLE, Molecule
from .parser import parse_smiles
from .writer import write_smiles

__all__ = ["ScaffoldResult", "murcko_scaffold", "scaffold_key"]


@dataclass(frozen=True)
class ScaffoldResult:
    scaffold: Molecule
    scaffold_smiles: str
    atom_map: tuple[int, ...]  # scaffold atom index -> source atom index


_EMPTY = ScaffoldResult(Molecule((), ()), "", ())


def murcko_scaffold(mol: Molecule) -> ScaffoldResult:
    """Extract the Murcko scaffold of a molecule."""
    rings = mol.rings
    if not rings:
        return _EMPTY

    ring_atoms: set[int] = set()
    for ring in rings:
        ring_atoms |= ring
    ring_bond_set: set[int] = set()
    for bonds in mol.ring_bonds:
        ring_bond_set |= bonds

    # Ring systems: connected components of ring atoms over ring bonds.
    system = {a: -1 for a in ring_atoms}
    sid = 0
    for seed in sorted(ring_atoms):
        if system[seed] >= 0:
            continue
        stack = [seed]
        system[seed] = sid
        while stack:
            u = stack.pop()
            for v, bidx in mol.neighbors(u):
                if bidx in ring_bond_set and system.get(v, 0) < 0:
                    system[v] = sid
                    stack.append(v)
        sid += 1

    keep = set(ring_atoms)
    if sid > 1:
        keep |= _linker_atoms(mol, ring_atoms, system)

    # Exocyclic atoms double/triple-bonded to the kept set, to fixpoint.
    changed = True
    while changed:
        changed = False
        for u in list(keep):
            for v, bidx in mol.neighbors(u):
                if v in keep:
                    continue
                if mol.bonds[bidx].order in (DOUBLE, TRIPLE):
                    keep.add(v)
                    changed = True

    atom_map = tuple(sorted(keep))
    new_index = {old: new for new, old in enumerate(atom_map)}
    atoms = [mol.atoms[old] for old in atom_map]
    bonds = []
    for bond in mol.bonds:
        if bond.a in keep and bond.b in keep:
            bonds.append(
                type(bond)(new_index[bond.a], new_index[bond.b],
                           bond.order, bond.direction)
            )
    scaffold = Molecule(atoms, bonds)
    return ScaffoldResult(scaffold, write_smiles(scaffold), atom_map)


def _linker_atoms(mol: Molecule, ring_atoms: set[int], system: dict[int, int]) -> set[int]:
    """Atoms on acyclic paths between distinct ring systems.

    Non-ring atoms form a forest; within each tree the path between two
    attachment points is unique, so it suffices to walk port pairs whose
    ring systems differ.
    """
    linkers: set[int] = set()
    tree_id: dict[int, int] = {}
    trees: list[list[int]] = []
    for seed in range(len(mol.atoms)):
        if seed in ring_atoms or seed in tree_id:
            continue
        tid = len(trees)
        members = [seed]
        tree_id[seed] = tid
        stack = [seed]
        while stack:
            u = stack.pop()
            for v, _ in mol.neighbors(u):
                if v in ring_atoms or v in tree_id:
                    continue
                tree_id[v] = tid
                members.append(v)
                stack.append(v)
        trees.append(members)

    ports_by_tree: dict[int, list[tuple[int, int]]] = {}
    for members in trees:
        for u in members:
            for v, _ in mol.neighbors(u):
                if v in ring_atoms:
                    ports_by_tree.setdefault(tree_id[u], []).append(
                        (u, system[v])
                    )

    for tid, ports in ports_by_tree.items():
        systems_here = {s for _, s in ports}
        if len(systems_here) < 2:
            continue
        for i in range(len(ports)):
            for j in range(i + 1, len(ports)):
                u1, s1 = ports[i]
                u2, s2 = ports[j]
                if s1 == s2:
                    continue
                linkers |= _tree_path(mol, ring_atoms, u1, u2)
    return linkers


def _tree_path(mol: Molecule, ring_atoms: set[int], start: int, goal: int) -> set[int]:
    if start == goal:
        return {start}
    prev = {start: -1}
    queue = [start]
    while queue:
        nxt = []
        for u in queue:
            for v, _ in mol.neighbors(u):
                if v in ring_atoms or v in prev:
                    continue
                prev[v] = u
                if v == goal:
                    path = {v}
                    while prev[v] >= 0:
                        v = prev[v]
                        path.add(v)
                    return path
                nxt.append(v)
        queue = nxt
    return set()  # unreachable within the tree; defensive


def scaffold_key(smiles: str) -> str:
    """Deterministic scaffold SMILES used as a grouping key.

    Acyclic molecules share the empty-string group.  Parse failures
    propagate to the caller, which knows the offending record.
    """
    return murcko_scaffold(parse_smiles(smiles)).scaffold_smiles
