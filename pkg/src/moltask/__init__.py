"""moltask: molecular text-to-text task corpora and evaluation.

Parse SMILES into molecular graphs, extract Murcko scaffolds, match
named fragment descriptors, build masked-span/scaffold/fragments/label
corpora, split datasets by scaffold without leakage, and score model
outputs (BLEU, word error rate, exact match, F1, ROC/PR-AUC,
Mann-Whitney significance grids).
"""

from .mol import Atom, Bond, Molecule
from .parser import parse_smiles
from .writer import write_smiles
from .tokenizer import TokenSequence, detokenize, tokenize
from .scaffold import ScaffoldResult, murcko_scaffold, scaffold_key
from .smarts import parse_smarts
from .matching import find_matches, has_match, match_count
from .registry import (
    FragmentPattern, FragmentRegistry, default_registry, fragment_counts,
    fragment_profile,
)
from .taskgen import (
    CorruptionPlan, LabelVocabulary, Record, TaskExample, apply_corruption,
    build_corpus, make_fragments_example, make_label_example,
    make_mlm_example, make_scaffold_example, plan_corruption, record_seed,
)
from .splitter import SplitAssignment, scaffold_split

__version__ = "0.1.0"

__all__ = [
    "Atom", "Bond", "Molecule", "parse_smiles", "write_smiles",
    "TokenSequence", "tokenize", "detokenize",
    "ScaffoldResult", "murcko_scaffold", "scaffold_key",
    "parse_smarts", "has_match", "match_count", "find_matches",
    "FragmentPattern", "FragmentRegistry", "default_registry",
    "fragment_profile", "fragment_counts",
    "TaskExample", "CorruptionPlan", "LabelVocabulary", "Record",
    "plan_corruption", "apply_corruption", "record_seed",
    "make_mlm_example", "make_scaffold_example", "make_fragments_example",
    "make_label_example", "build_corpus",
    "SplitAssignment", "scaffold_split",
]
