"""SMILES parser producing :class:`~moltask.mol.Molecule` graphs.

Supports the organic subset, bracket atoms (isotope, chirality, explicit
hydrogens, charge, atom class), arbitrarily nested branches, one- and
two-digit (``%nn``) ring closures, multi-component ``.`` inputs and
directional bond markers.  Aromatic (lowercase) input is accepted as-is;
Kekule input is rewritten to aromatic form for simple 5/6-membered rings
via an electron-counting rule.

Each malformed input raises a distinct error class carrying the
offending character position.
"""

from __future__ import annotations

import re

from .mol import (
    AROMATIC, AROMATIC_CAPABLE, DOUBLE, KNOWN_ELEMENTS, SINGLE, TRIPLE,
    _HARD_MAX_BONDSUM, Atom, Bond, Molecule,
)

__all__ = [
    "parse_smiles", "SmilesParseError", "UnbalancedParenthesesError",
    "RingClosureError", "UnknownSymbolError", "AromaticityError",
    "ValenceError",
]


class SmilesParseError(ValueError):
    """Base class for SMILES parse failures."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class UnbalancedParenthesesError(SmilesParseError):
    pass


class RingClosureError(SmilesParseError):
    pass


class UnknownSymbolError(SmilesParseError):
    pass


class AromaticityError(SmilesParseError):
    pass


class ValenceError(SmilesParseError):
    pass


_AROMATIC_ORGANIC = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}
_AROMATIC_BRACKET = dict(_AROMATIC_ORGANIC, se="Se", **{"as": "As"})
_BOND_CHARS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC,
               "/": SINGLE, "\\": SINGLE}

_BRACKET_RE = re.compile(
    r"""\[
        (?P<isotope>\d+)?
        (?P<symbol>[A-Z][a-z]?|[a-z][a-z]?|\*)
        (?P<chiral>@@|@[A-Z]{2}\d+|@)?
        (?P<hcount>H\d*)?
        (?P<charge>\+\+|--|\+\d*|-\d*)?
        (?::(?P<cls>\d+))?
        \]""",
    re.X,
)


def _parse_bracket(text: str, start: int) -> tuple[Atom, int]:
    m = _BRACKET_RE.match(text, start)
    if not m:
        end = text.find("]", start)
        if end < 0:
            raise UnbalancedParenthesesError("unterminated bracket atom", start)
        raise UnknownSymbolError(
            f"malformed bracket atom {text[start:end + 1]!r}", start
        )
    sym = m.group("symbol")
    aromatic = sym[0].islower()
    if aromatic:
        element = _AROMATIC_BRACKET.get(sym)
        if element is None:
            if sym.capitalize() in KNOWN_ELEMENTS:
                raise AromaticityError(
                    f"element {sym.capitalize()} cannot be aromatic",
                    m.start("symbol"),
                )
            raise UnknownSymbolError(
                f"unknown element {sym!r}", m.start("symbol")
            )
    else:
        element = sym
        if element not in KNOWN_ELEMENTS and element != "*":
            raise UnknownSymbolError(
                f"unknown element {element!r}", m.start("symbol")
            )
    if element == "*":
        raise UnknownSymbolError("wildcard atom not allowed in SMILES", start)
    if aromatic and element not in AROMATIC_CAPABLE:
        raise AromaticityError(
            f"element {element} cannot be aromatic", m.start("symbol")
        )
    hcount = 0
    if m.group("hcount"):
        digits = m.group("hcount")[1:]
        hcount = int(digits) if digits else 1
    charge = 0
    if m.group("charge"):
        c = m.group("charge")
        if c == "++":
            charge = 2
        elif c == "--":
            charge = -2
        else:
            mag = int(c[1:]) if len(c) > 1 else 1
            charge = mag if c[0] == "+" else -mag
    isotope = int(m.group("isotope")) if m.group("isotope") else None
    atom = Atom(
        element=element,
        aromatic=aromatic,
        formal_charge=charge,
        bracket_h=hcount,
        isotope=isotope,
        chirality=m.group("chiral"),
    )
    return atom, m.end()


def parse_smiles(text: str, aromatize: bool = True) -> Molecule:
    """Parse a SMILES string into a :class:`Molecule`.

    Args:
        text: non-empty ASCII SMILES string.
        aromatize: rewrite simple Kekule 5/6-rings to aromatic form.
    """
    if not text:
        raise UnknownSymbolError("empty SMILES", 0)
    if not text.isascii():
        raise UnknownSymbolError("SMILES must be ASCII", 0)

    atoms: list[Atom] = []
    atom_pos: list[int] = []
    bonds: list[Bond] = []
    prev: int | None = None
    pending_order: int | None = None
    pending_dir: str | None = None
    pending_pos = 0
    branch_stack: list[int | None] = []
    # ring number -> (atom index, bond order or None, direction, position)
    open_rings: dict[int, tuple[int, int | None, str | None, int]] = {}

    def add_atom(atom: Atom, pos: int) -> None:
        nonlocal prev, pending_order, pending_dir
        atoms.append(atom)
        atom_pos.append(pos)
        idx = len(atoms) - 1
        if prev is not None:
            order = pending_order
            if order is None:
                order = (
                    AROMATIC
                    if atoms[prev].aromatic and atom.aromatic
                    else SINGLE
                )
            if order == AROMATIC and not (atoms[prev].aromatic and atom.aromatic):
                raise AromaticityError(
                    "aromatic bond between non-aromatic atoms", pending_pos
                )
            bonds.append(Bond(prev, idx, order, pending_dir))
        prev = idx
        pending_order = None
        pending_dir = None

    def close_ring(num: int, pos: int) -> None:
        nonlocal pending_order, pending_dir
        if prev is None:
            raise RingClosureError("ring closure before any atom", pos)
        if num in open_rings:
            other, o_order, o_dir, o_pos = open_rings.pop(num)
            if other == prev:
                raise RingClosureError(
                    f"ring closure {num} bonds an atom to itself", pos
                )
            order = pending_order if pending_order is not None else o_order
            if (
                pending_order is not None
                and o_order is not None
                and pending_order != o_order
            ):
                raise RingClosureError(
                    f"conflicting bond orders on ring closure {num}", pos
                )
            if order is None:
                order = (
                    AROMATIC
                    if atoms[other].aromatic and atoms[prev].aromatic
                    else SINGLE
                )
            if order == AROMATIC and not (
                atoms[other].aromatic and atoms[prev].aromatic
            ):
                raise AromaticityError(
                    "aromatic ring-closure bond between non-aromatic atoms", pos
                )
            if any(
                {b.a, b.b} == {other, prev} for b in bonds
            ):
                raise RingClosureError(
                    f"duplicate bond via ring closure {num}", pos
                )
            bonds.append(Bond(other, prev, order, pending_dir or o_dir))
        else:
            open_rings[num] = (prev, pending_order, pending_dir, pos)
        pending_order = None
        pending_dir = None

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "[":
            start = i
            atom, i = _parse_bracket(text, i)
            add_atom(atom, start)
            continue
        if ch == "(":
            if pending_order is not None:
                raise SmilesParseError("bond symbol before branch", i)
            if prev is None:
                raise UnbalancedParenthesesError("branch before any atom", i)
            branch_stack.append(prev)
            i += 1
            continue
        if ch == ")":
            if not branch_stack:
                raise UnbalancedParenthesesError("unmatched ')'", i)
            if pending_order is not None:
                raise SmilesParseError("dangling bond symbol before ')'", i)
            prev = branch_stack.pop()
            i += 1
            continue
        if ch in _BOND_CHARS:
            if pending_order is not None:
                raise SmilesParseError("two consecutive bond symbols", i)
            pending_order = _BOND_CHARS[ch]
            pending_dir = ch if ch in "/\\" else None
            pending_pos = i
            i += 1
            continue
        if ch.isdigit():
            close_ring(int(ch), i)
            i += 1
            continue
        if ch == "%":
            if i + 2 >= n or not text[i + 1 : i + 3].isdigit():
                raise RingClosureError("'%' needs two digits", i)
            close_ring(int(text[i + 1 : i + 3]), i)
            i += 3
            continue
        if ch == ".":
            if pending_order is not None:
                raise SmilesParseError("bond symbol before '.'", i)
            prev = None
            i += 1
            continue
        if ch in "BCNOPSFI" or text[i : i + 2] in ("Cl", "Br"):
            start = i
            if text[i : i + 2] in ("Cl", "Br"):
                element, i = text[i : i + 2], i + 2
            else:
                element, i = ch, i + 1
            add_atom(Atom(element=element), start)
            continue
        if ch in _AROMATIC_ORGANIC:
            add_atom(Atom(element=_AROMATIC_ORGANIC[ch], aromatic=True), i)
            i += 1
            continue
        raise UnknownSymbolError(f"unexpected character {ch!r}", i)

    if branch_stack:
        raise UnbalancedParenthesesError("unclosed '('", n)
    if pending_order is not None:
        raise SmilesParseError("dangling bond symbol at end of input", n - 1)
    if open_rings:
        num, (_, _, _, pos) = min(open_rings.items(), key=lambda kv: kv[1][3])
        raise RingClosureError(f"unclosed ring closure {num}", pos)
    if not atoms:
        raise UnknownSymbolError("no atoms in SMILES", 0)

    mol = Molecule(atoms, bonds, source_text=text)
    _check_valences(mol, atom_pos)
    if aromatize:
        rewritten = _aromatize(mol)
        if rewritten is not None:
            mol = rewritten
    return mol


def _check_valences(mol: Molecule, positions: list[int]) -> None:
    for idx, atom in enumerate(mol.atoms):
        limit = _HARD_MAX_BONDSUM.get(atom.element)
        if limit is None:
            continue
        if atom.formal_charge > 0:
            limit += 1
        if int(mol.bond_order_sum(idx)) > limit:
            raise ValenceError(
                f"atom {atom.element} exceeds valence {limit}", positions[idx]
            )


def _aromatize(mol: Molecule) -> Molecule | None:
    """Rewrite simple Kekule 5/6-membered rings to aromatic form.

    A ring qualifies when every member either takes part in exactly one
    double bond between ring-system atoms (1 pi electron) or is a
    heteroatom with only single bonds (lone pair, 2 electrons), and the
    electron count is six.  Quinoid and partially saturated rings are
    left alone.
    """
    if all(
        a.aromatic or a.element not in AROMATIC_CAPABLE for a in mol.atoms
    ):
        return None
    ring_atoms_all: set[int] = set()
    for ring in mol.rings:
        ring_atoms_all |= ring

    aromatic_atoms: set[int] = set()
    aromatic_bonds: set[int] = set()
    for ring, rbonds in zip(mol.rings, mol.ring_bonds):
        if len(ring) not in (5, 6):
            continue
        if any(mol.atoms[a].aromatic for a in ring):
            continue
        electrons = 0
        ok = True
        for a in ring:
            atom = mol.atoms[a]
            if atom.element not in AROMATIC_CAPABLE:
                ok = False
                break
            doubles = [
                b for _, b in mol.neighbors(a) if mol.bonds[b].order == DOUBLE
            ]
            if len(doubles) > 1 or any(
                mol.bonds[b].order == TRIPLE for _, b in mol.neighbors(a)
            ):
                ok = False
                break
            if len(doubles) == 1:
                other = mol.bonds[doubles[0]].other(a)
                if other not in ring_atoms_all:
                    ok = False  # exocyclic double bond (quinoid)
                    break
                electrons += 1
            else:
                if atom.element == "C" and atom.formal_charge == 0:
                    ok = False  # saturated carbon breaks conjugation
                    break
                electrons += 2
        if ok and electrons == 6:
            aromatic_atoms |= ring
            aromatic_bonds |= {
                b for b in rbonds
                if mol.bonds[b].a in ring and mol.bonds[b].b in ring
            }
    if not aromatic_atoms:
        return None

    new_atoms = []
    for idx, atom in enumerate(mol.atoms):
        if idx in aromatic_atoms and not atom.aromatic:
            # Pin the Kekule-form hydrogen count so the aromatic rewrite
            # never changes the hydrogen model (e.g. pyrrole N keeps 1 H).
            h = mol.implicit_h(idx)
            new_atoms.append(
                Atom(
                    element=atom.element,
                    aromatic=True,
                    formal_charge=atom.formal_charge,
                    bracket_h=atom.bracket_h,
                    isotope=atom.isotope,
                    chirality=atom.chirality,
                    pinned_h=h if atom.bracket_h is None else None,
                )
            )
        else:
            new_atoms.append(atom)
    new_bonds = []
    for bidx, bond in enumerate(mol.bonds):
        if bidx in aromatic_bonds:
            new_bonds.append(Bond(bond.a, bond.b, AROMATIC, bond.direction))
        else:
            new_bonds.append(bond)
    out = Molecule(new_atoms, new_bonds, source_text=mol.source_text)
    # Drop pins that agree with the aromatic hydrogen rule anyway.
    trimmed = []
    changed = False
    for idx, atom in enumerate(out.atoms):
        if atom.pinned_h is not None and out._aromatic_h(idx, atom) == atom.pinned_h:
            atom = Atom(
                element=atom.element, aromatic=atom.aromatic,
                formal_charge=atom.formal_charge, bracket_h=atom.bracket_h,
                isotope=atom.isotope, chirality=atom.chirality,
            )
            changed = True
        trimmed.append(atom)
    if changed:
        out = Molecule(trimmed, new_bonds, source_text=mol.source_text)
    return out
