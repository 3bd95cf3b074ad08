"""Parsing SMILES into graphs, writing them back, and tokenizing.

Run: python demos/01_parse_write_tokenize.py
"""

from moltask import parse_smiles, tokenize, write_smiles

aspirin = "CC(=O)Oc1ccccc1C(=O)O"
mol = parse_smiles(aspirin)

print(f"input:        {aspirin}")
print(f"heavy atoms:  {mol.heavy_atom_count()}")
print(f"bonds:        {len(mol.bonds)}")
print(f"rings:        {[sorted(r) for r in mol.rings]}")
print(f"written back: {write_smiles(mol)}")

# Kekule input is normalized to aromatic form for simple rings:
print(f"kekule benzene -> {write_smiles(parse_smiles('C1=CC=CC=C1'))}")

# The tokenizer emits the space-separated streams used by every task:
print(f"tokens: {tokenize(aspirin).text()}")
print(f"tokens: {tokenize('scaffold: Clc1ccccc1 <extra_id_0> fr_ester').text()}")

# Hydrogen model highlights:
pyrrole = parse_smiles("c1cc[nH]c1")
n_index = next(i for i, a in enumerate(pyrrole.atoms) if a.element == "N")
print(f"pyrrole N hydrogens: {pyrrole.implicit_h(n_index)}")
print(f"pyrrole written:     {write_smiles(pyrrole)}")
