"""Murcko scaffolds and fragment-presence profiles.

Run: python demos/02_scaffolds_and_fragments.py
"""

from moltask import (
    default_registry, fragment_counts, fragment_profile, murcko_scaffold,
    parse_smiles, scaffold_key,
)

examples = {
    "aspirin": "CC(=O)Oc1ccccc1C(=O)O",
    "ibuprofen": "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "diphenylmethane": "c1ccccc1Cc1ccccc1",
    "ethanol": "CCO",
}

print("== Murcko scaffolds ==")
for name, smiles in examples.items():
    result = murcko_scaffold(parse_smiles(smiles))
    print(f"{name:16} -> {result.scaffold_smiles!r} "
          f"({len(result.atom_map)} atoms kept)")

# Different decorations of one ring share a scaffold key, which is what
# the scaffold splitter groups by:
print("\nscaffold keys:",
      scaffold_key("Cc1ccccc1"), "==", scaffold_key("CCc1ccc(O)cc1"))

print("\n== Fragment profiles (registry order) ==")
registry = default_registry()
print(f"registry holds {len(registry)} named fragments")
for name, smiles in examples.items():
    profile = fragment_profile(parse_smiles(smiles), registry)
    print(f"{name:16} -> {' '.join(profile) or '(none)'}")

counts = fragment_counts(parse_smiles(examples["aspirin"]), registry)
print(f"\naspirin carbonyl count (fr_C_O): {counts['fr_C_O']}")
