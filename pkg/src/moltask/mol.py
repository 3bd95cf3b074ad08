"""Molecular graph model: atoms, bonds, ring perception, implicit hydrogens.

Molecules are immutable after construction and safe to share across
threads.  Everything derived from the graph (adjacency, SSSR rings,
implicit hydrogen counts, connected components) is computed once and
cached on the instance.
"""

from __future__ import annotations

from dataclasses import dataclass

# Bond orders.  Aromatic is a distinct order rather than a flag so ring
# perception and substructure matching can treat bonds uniformly.
SINGLE, DOUBLE, TRIPLE, AROMATIC = 1, 2, 3, 4

BOND_VALUE = {SINGLE: 1.0, DOUBLE: 2.0, TRIPLE: 3.0, AROMATIC: 1.5}

BOND_SYMBOL = {SINGLE: "-", DOUBLE: "=", TRIPLE: "#", AROMATIC: ":"}

# Elements that may carry the aromatic (lowercase) flag.
AROMATIC_CAPABLE = frozenset({"B", "C", "N", "O", "P", "S", "Se", "As"})

# Organic subset: writable without brackets.
ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})

# Standard valence lists used for implicit hydrogen inference.  The
# smallest listed valence >= the bond-order sum wins.
DEFAULT_VALENCES = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}

# Hard per-element ceilings on the explicit bond-order sum.  Exceeding
# these is treated as a malformed input rather than a hypervalent atom
# to clamp; mild hypervalence (e.g. neutral tetravalent N) is tolerated.
_HARD_MAX_BONDSUM = {
    "B": 4, "C": 4, "N": 5, "O": 3, "P": 6, "S": 6,
    "F": 1, "Cl": 7, "Br": 7, "I": 7,
}

_PERIODIC = (
    "H,He,Li,Be,B,C,N,O,F,Ne,Na,Mg,Al,Si,P,S,Cl,Ar,K,Ca,Sc,Ti,V,Cr,Mn,Fe,"
    "Co,Ni,Cu,Zn,Ga,Ge,As,Se,Br,Kr,Rb,Sr,Y,Zr,Nb,Mo,Tc,Ru,Rh,Pd,Ag,Cd,In,"
    "Sn,Sb,Te,I,Xe,Cs,Ba,La,Ce,Pr,Nd,Pm,Sm,Eu,Gd,Tb,Dy,Ho,Er,Tm,Yb,Lu,Hf,"
    "Ta,W,Re,Os,Ir,Pt,Au,Hg,Tl,Pb,Bi,Po,At,Rn,Fr,Ra,Ac,Th,Pa,U,Np,Pu,Am,"
    "Cm,Bk,Cf,Es,Fm,Md,No,Lr,Rf,Db,Sg,Bh,Hs,Mt,Ds,Rg,Cn,Nh,Fl,Mc,Lv,Ts,Og"
).split(",")

ATOMIC_NUMBER = {sym: i + 1 for i, sym in enumerate(_PERIODIC)}
KNOWN_ELEMENTS = frozenset(ATOMIC_NUMBER)


@dataclass(frozen=True, slots=True)
class Atom:
    """One atom of a molecular graph.

    ``bracket_h`` is the explicit hydrogen count and is present iff the
    atom came from a bracket expression.  ``pinned_h`` is set internally
    when a Kekule ring is rewritten to aromatic form and the aromatic
    hydrogen rule would otherwise lose a hydrogen (e.g. pyrrole N).
    ``chirality`` is an opaque marker, preserved but never interpreted.
    """

    element: str
    aromatic: bool = False
    formal_charge: int = 0
    bracket_h: int | None = None
    isotope: int | None = None
    chirality: str | None = None
    pinned_h: int | None = None

    @property
    def explicit_h(self) -> int | None:
        if self.pinned_h is not None:
            return self.pinned_h
        return self.bracket_h


@dataclass(frozen=True, slots=True)
class Bond:
    """An edge between two atom indices with an order and optional
    directional marker ('/' or '\\', preserved but not interpreted)."""

    a: int
    b: int
    order: int = SINGLE
    direction: str | None = None

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


class MoleculeError(ValueError):
    """Raised when a Molecule would violate a structural invariant."""


class Molecule:
    """Immutable attributed molecular graph.

    Rings are the smallest set of smallest rings (SSSR); the number of
    rings always equals ``bonds - atoms + components``.
    """

    __slots__ = (
        "atoms", "bonds", "source_text", "_adj", "_rings", "_ring_bonds",
        "_components", "_implicit_h", "_clamped", "_cache",
    )

    def __init__(self, atoms, bonds, source_text: str = ""):
        self.atoms: tuple[Atom, ...] = tuple(atoms)
        self.bonds: tuple[Bond, ...] = tuple(bonds)
        self.source_text = source_text
        n = len(self.atoms)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for bidx, bond in enumerate(self.bonds):
            if bond.a == bond.b:
                raise MoleculeError(f"bond {bidx} joins atom {bond.a} to itself")
            if not (0 <= bond.a < n and 0 <= bond.b < n):
                raise MoleculeError(f"bond {bidx} endpoint out of range")
            if bond.order == AROMATIC:
                if not (self.atoms[bond.a].aromatic and self.atoms[bond.b].aromatic):
                    raise MoleculeError(
                        f"aromatic bond {bidx} joins non-aromatic atoms"
                    )
            adj[bond.a].append((bond.b, bidx))
            adj[bond.b].append((bond.a, bidx))
        self._adj = tuple(tuple(x) for x in adj)
        self._rings = None
        self._ring_bonds = None
        self._components = None
        self._implicit_h = None
        self._clamped = None
        self._cache: dict = {}

    # -- basic accessors -------------------------------------------------

    def __len__(self) -> int:
        return len(self.atoms)

    def neighbors(self, idx: int) -> tuple[tuple[int, int], ...]:
        """(neighbor index, bond index) pairs for one atom."""
        return self._adj[idx]

    def degree(self, idx: int) -> int:
        return len(self._adj[idx])

    def bond_between(self, i: int, j: int) -> Bond | None:
        for nbr, bidx in self._adj[i]:
            if nbr == j:
                return self.bonds[bidx]
        return None

    def heavy_atom_count(self) -> int:
        return sum(1 for a in self.atoms if a.element != "H")

    # -- connected components --------------------------------------------

    @property
    def components(self) -> tuple[int, ...]:
        """Connected-component id per atom, numbered in first-seen order."""
        if self._components is None:
            comp = [-1] * len(self.atoms)
            cid = 0
            for start in range(len(self.atoms)):
                if comp[start] >= 0:
                    continue
                stack = [start]
                comp[start] = cid
                while stack:
                    u = stack.pop()
                    for v, _ in self._adj[u]:
                        if comp[v] < 0:
                            comp[v] = cid
                            stack.append(v)
                cid += 1
            self._components = tuple(comp)
        return self._components

    def component_count(self) -> int:
        return max(self.components, default=-1) + 1

    # -- ring perception ---------------------------------------------------

    @property
    def rings(self) -> tuple[frozenset[int], ...]:
        """SSSR rings as atom-index sets."""
        if self._rings is None:
            self._perceive_rings()
        return self._rings

    @property
    def ring_bonds(self) -> tuple[frozenset[int], ...]:
        """Bond-index sets parallel to :attr:`rings`."""
        if self._ring_bonds is None:
            self._perceive_rings()
        return self._ring_bonds

    def _bridges(self) -> set[int]:
        """Bond indices that are bridges (not on any cycle)."""
        n = len(self.atoms)
        visited = [False] * n
        disc = [0] * n
        low = [0] * n
        bridges: set[int] = set()
        timer = 0
        for root in range(n):
            if visited[root]:
                continue
            # Iterative DFS; (node, parent bond, neighbor iterator index).
            stack = [(root, -1, 0)]
            visited[root] = True
            disc[root] = low[root] = timer
            timer += 1
            while stack:
                u, pbond, i = stack[-1]
                if i < len(self._adj[u]):
                    stack[-1] = (u, pbond, i + 1)
                    v, bidx = self._adj[u][i]
                    if bidx == pbond:
                        continue
                    if visited[v]:
                        low[u] = min(low[u], disc[v])
                    else:
                        visited[v] = True
                        disc[v] = low[v] = timer
                        timer += 1
                        stack.append((v, bidx, 0))
                else:
                    stack.pop()
                    if stack:
                        p = stack[-1][0]
                        low[p] = min(low[p], low[u])
                        if low[u] > disc[p]:
                            bridges.add(pbond)
        return bridges

    def _perceive_rings(self) -> None:
        n_rings = len(self.bonds) - len(self.atoms) + self.component_count()
        if n_rings <= 0:
            self._rings = ()
            self._ring_bonds = ()
            return
        bridges = self._bridges()
        cyclic_bonds = [i for i in range(len(self.bonds)) if i not in bridges]
        cyclic_adj: dict[int, list[tuple[int, int]]] = {}
        for bidx in cyclic_bonds:
            bond = self.bonds[bidx]
            cyclic_adj.setdefault(bond.a, []).append((bond.b, bidx))
            cyclic_adj.setdefault(bond.b, []).append((bond.a, bidx))

        # Candidate for each cyclic bond: the smallest cycle through it,
        # found by BFS between its endpoints avoiding the bond itself.
        candidates: list[tuple[int, tuple[int, ...], int]] = []
        for bidx in cyclic_bonds:
            bond = self.bonds[bidx]
            prev = {bond.a: (-1, -1)}
            queue = [bond.a]
            found = False
            while queue and not found:
                nxt: list[int] = []
                for u in queue:
                    for v, eidx in cyclic_adj.get(u, ()):
                        if eidx == bidx or v in prev:
                            continue
                        prev[v] = (u, eidx)
                        if v == bond.b:
                            found = True
                            break
                        nxt.append(v)
                    if found:
                        break
                queue = nxt
            if not found:
                continue
            atoms = [bond.b]
            mask = 1 << bidx
            u = bond.b
            while u != bond.a:
                u, eidx = prev[u]
                atoms.append(u)
                mask |= 1 << eidx
            candidates.append((len(atoms), tuple(sorted(atoms)), mask))

        candidates.sort(key=lambda c: (c[0], c[1]))
        basis: list[int] = []  # reduced GF(2) bond masks
        rings: list[frozenset[int]] = []
        ring_bonds: list[frozenset[int]] = []
        seen: set[tuple[int, ...]] = set()
        for size, atoms, mask in candidates:
            if atoms in seen:
                continue
            reduced = mask
            for b in basis:
                reduced = min(reduced, reduced ^ b)
            if reduced == 0:
                continue
            seen.add(atoms)
            basis.append(reduced)
            rings.append(frozenset(atoms))
            ring_bonds.append(
                frozenset(i for i in range(len(self.bonds)) if mask >> i & 1)
            )
            if len(rings) == n_rings:
                break
        self._rings = tuple(rings)
        self._ring_bonds = tuple(ring_bonds)

    # -- hydrogen model ----------------------------------------------------

    def bond_order_sum(self, idx: int) -> float:
        return sum(BOND_VALUE[self.bonds[b].order] for _, b in self._adj[idx])

    def implicit_h(self, idx: int) -> int:
        """Total hydrogen count of one atom.

        Bracket atoms report their explicit count.  Organic-subset atoms
        use the standard valence model; hypervalent atoms clamp at zero
        and are recorded in :attr:`clamped_atoms`.
        """
        if self._implicit_h is None:
            self._compute_h()
        return self._implicit_h[idx]

    @property
    def clamped_atoms(self) -> tuple[int, ...]:
        """Atoms whose hydrogen count was clamped at zero (diagnostics)."""
        if self._clamped is None:
            self._compute_h()
        return self._clamped

    def _compute_h(self) -> None:
        counts = []
        clamped = []
        for idx, atom in enumerate(self.atoms):
            h = atom.explicit_h
            if h is not None:
                counts.append(h)
                continue
            if atom.element not in DEFAULT_VALENCES:
                counts.append(0)
                continue
            if atom.aromatic:
                counts.append(self._aromatic_h(idx, atom))
                continue
            s = int(self.bond_order_sum(idx))
            valences = DEFAULT_VALENCES[atom.element]
            for v in valences:
                if v >= s:
                    counts.append(v - s)
                    break
            else:
                counts.append(0)
                clamped.append(idx)
        self._implicit_h = counts
        self._clamped = tuple(clamped)

    def _aromatic_h(self, idx: int, atom: Atom) -> int:
        # Lone-pair donors (o, s, se) and bare pyridinic-style n/p carry
        # no hydrogen; pyrrole-style nitrogens must be written [nH].
        # Aromatic carbon keeps one hydrogen only when both of its ring
        # bonds are its only connections.
        if atom.element != "C":
            return 0
        n_arom = sum(
            1 for _, b in self._adj[idx] if self.bonds[b].order == AROMATIC
        )
        if n_arom == 2 and self.degree(idx) == 2:
            return 1
        return 0

    # -- per-atom ring statistics (used by substructure matching) ---------

    def ring_membership(self) -> tuple[tuple[int, ...], tuple[frozenset, ...], frozenset]:
        """(ring counts per atom, ring sizes per atom, ring bond indices)."""
        key = "ring_membership"
        cached = self._cache.get(key)
        if cached is None:
            counts = [0] * len(self.atoms)
            sizes: list[set[int]] = [set() for _ in range(len(self.atoms))]
            rbonds: set[int] = set()
            for ring, bonds in zip(self.rings, self.ring_bonds):
                for a in ring:
                    counts[a] += 1
                    sizes[a].add(len(ring))
                rbonds |= bonds
            cached = (
                tuple(counts),
                tuple(frozenset(s) for s in sizes),
                frozenset(rbonds),
            )
            self._cache[key] = cached
        return cached


def total_valence(mol: Molecule, idx: int) -> int:
    """Bond-order sum (aromatic bonds as 1.5, floored) plus hydrogens."""
    return int(mol.bond_order_sum(idx)) + mol.implicit_h(idx)


def connections(mol: Molecule, idx: int) -> int:
    """Total connections: explicit neighbors plus hydrogens."""
    return mol.degree(idx) + mol.implicit_h(idx)
