"""SMILES parsing: grammar coverage and the error taxonomy."""

import pytest

from moltask.mol import AROMATIC, DOUBLE, SINGLE, TRIPLE
from moltask.parser import (
    AromaticityError, RingClosureError, SmilesParseError,
    UnbalancedParenthesesError, UnknownSymbolError, ValenceError,
    parse_smiles,
)


def test_two_letter_organic_atoms():
    mol = parse_smiles("ClCBr")
    assert [a.element for a in mol.atoms] == ["Cl", "C", "Br"]


def test_bracket_atom_fields():
    mol = parse_smiles("[13CH3+]")
    atom = mol.atoms[0]
    assert atom.isotope == 13
    assert atom.element == "C"
    assert atom.bracket_h == 3
    assert atom.formal_charge == 1


def test_bracket_charges():
    assert parse_smiles("[O-]").atoms[0].formal_charge == -1
    assert parse_smiles("[Fe+3]").atoms[0].formal_charge == 3
    assert parse_smiles("[Ca++]").atoms[0].formal_charge == 2
    assert parse_smiles("[N+]") .atoms[0].formal_charge == 1


def test_bracket_default_h_zero():
    assert parse_smiles("[C]").atoms[0].bracket_h == 0
    assert parse_smiles("[CH]").atoms[0].bracket_h == 1


def test_chirality_preserved_opaque():
    mol = parse_smiles("N[C@@H](C)C(=O)O")
    assert mol.atoms[1].chirality == "@@"
    mol2 = parse_smiles("[C@H](N)(C)O")
    assert mol2.atoms[0].chirality == "@"


def test_directional_bonds_preserved_opaque():
    mol = parse_smiles("C/C=C/C")
    dirs = [b.direction for b in mol.bonds]
    assert dirs == ["/", None, "/"]
    assert [b.order for b in mol.bonds] == [SINGLE, DOUBLE, SINGLE]


def test_ring_closure_percent_digits():
    mol = parse_smiles("C%12CCCCC%12")
    assert len(mol.rings) == 1


def test_ring_closure_digit_reuse():
    mol = parse_smiles("C1CC1C1CC1")
    assert sorted(len(r) for r in mol.rings) == [3, 3]


def test_ring_bond_order_on_either_side():
    assert any(b.order == DOUBLE for b in parse_smiles("C=1CCCCC=1", aromatize=False).bonds)
    assert any(b.order == DOUBLE for b in parse_smiles("C1CCCCC=1", aromatize=False).bonds)


def test_nested_branches():
    mol = parse_smiles("CC(C(C(C)(C)C)O)N")
    assert mol.heavy_atom_count() == 9


def test_triple_bond():
    mol = parse_smiles("C#N")
    assert mol.bonds[0].order == TRIPLE


def test_multi_component_keeps_component_index():
    mol = parse_smiles("[Na+].[Cl-]")
    assert mol.component_count() == 2


# -- error taxonomy ---------------------------------------------------------

def test_unbalanced_open_paren():
    with pytest.raises(UnbalancedParenthesesError):
        parse_smiles("CC(C")


def test_unbalanced_close_paren():
    with pytest.raises(UnbalancedParenthesesError) as err:
        parse_smiles("CC)C")
    assert err.value.position == 2


def test_unresolved_ring_closure():
    with pytest.raises(RingClosureError) as err:
        parse_smiles("C1CCC")
    assert err.value.position == 1


def test_conflicting_ring_bond_orders():
    with pytest.raises(RingClosureError):
        parse_smiles("C=1CCCCC#1")


def test_self_ring_closure():
    with pytest.raises(RingClosureError):
        parse_smiles("C11")


def test_unknown_atom_symbol():
    with pytest.raises(UnknownSymbolError):
        parse_smiles("CQ")
    with pytest.raises(UnknownSymbolError):
        parse_smiles("[Zz]")


def test_aromatic_flag_on_non_capable_element():
    with pytest.raises(AromaticityError):
        parse_smiles("[te]1cccc1")


def test_aromatic_bond_between_aliphatic_atoms():
    with pytest.raises(AromaticityError):
        parse_smiles("C:C")


def test_valence_error():
    with pytest.raises(ValenceError):
        parse_smiles("C(=O)(=O)=O")


def test_empty_and_whitespace():
    with pytest.raises(SmilesParseError):
        parse_smiles("")


def test_dangling_bond_symbol():
    with pytest.raises(SmilesParseError):
        parse_smiles("CC=")


def test_consecutive_bond_symbols():
    with pytest.raises(SmilesParseError):
        parse_smiles("C==C")


def test_error_carries_position():
    with pytest.raises(UnknownSymbolError) as err:
        parse_smiles("CCCC?C")
    assert err.value.position == 4


# -- Kekule aromatization ---------------------------------------------------

def test_kekule_benzene_aromatized():
    mol = parse_smiles("C1=CC=CC=C1")
    assert all(a.aromatic for a in mol.atoms)
    assert all(b.order == AROMATIC for b in mol.bonds)


def test_kekule_pyridine_aromatized():
    mol = parse_smiles("C1=CC=NC=C1")
    assert all(a.aromatic for a in mol.atoms)
    n = next(i for i, a in enumerate(mol.atoms) if a.element == "N")
    assert mol.implicit_h(n) == 0


def test_kekule_pyrrole_keeps_nh():
    mol = parse_smiles("C1=CC=CN1")
    n = next(i for i, a in enumerate(mol.atoms) if a.element == "N")
    assert mol.atoms[n].aromatic
    assert mol.implicit_h(n) == 1


def test_kekule_naphthalene_aromatized():
    mol = parse_smiles("C1=CC2=CC=CC=C2C=C1")
    assert all(a.aromatic for a in mol.atoms)


def test_quinone_not_aromatized():
    mol = parse_smiles("O=C1C=CC(=O)C=C1")
    assert not any(a.aromatic for a in mol.atoms)


def test_cyclohexene_not_aromatized():
    mol = parse_smiles("C1=CCCCC1")
    assert not any(a.aromatic for a in mol.atoms)


def test_cyclohexane_untouched():
    mol = parse_smiles("C1CCCCC1")
    assert not any(a.aromatic for a in mol.atoms)


def test_already_aromatic_accepted_as_is():
    mol = parse_smiles("c1ccccc1")
    assert all(a.aromatic for a in mol.atoms)
