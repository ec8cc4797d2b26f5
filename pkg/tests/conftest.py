import sys
from pathlib import Path

import pytest

# Make oracles.py and test helpers importable without packaging them.
sys.path.insert(0, str(Path(__file__).parent))

from triz_workbench.knowledge import default_knowledge_base
from triz_workbench.cases import seed_cases
from triz_workbench.prompts import default_engine


@pytest.fixture(scope="session")
def kb():
    return default_knowledge_base()


@pytest.fixture(scope="session")
def seeds():
    return seed_cases()


@pytest.fixture(scope="session")
def engine():
    return default_engine()


@pytest.fixture()
def fixtures_dir():
    return Path(__file__).parent / "fixtures"
