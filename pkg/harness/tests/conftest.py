import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from molgen import sample_molecules  # noqa: E402


def build_corpus_via_cli(tmpdir: Path, molecules, tasks="combined",
                         seed=0) -> Path:
    """Corpora come from the moltask CLI: the only coupling between the
    harness and the core package is its external file interfaces."""
    mols = tmpdir / "molecules.txt"
    mols.write_text("\n".join(molecules) + "\n")
    corpus = tmpdir / "corpus.jsonl"
    subprocess.run(
        [sys.executable, "-m", "moltask.cli", "build-corpus", str(mols),
         "-o", str(corpus), "--tasks", tasks, "--seed", str(seed)],
        check=True, capture_output=True,
    )
    return corpus


@pytest.fixture(scope="session")
def tiny_corpus(tmp_path_factory) -> Path:
    tmpdir = tmp_path_factory.mktemp("tiny_corpus")
    return build_corpus_via_cli(tmpdir, sample_molecules(200, seed=5))
