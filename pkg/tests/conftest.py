import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import corpus  # noqa: E402


@pytest.fixture(scope="session")
def corpus_1000():
    return corpus(1000, seed=7)


@pytest.fixture(scope="session")
def corpus_300():
    return corpus(300, seed=11)
