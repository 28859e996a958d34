from __future__ import annotations

from pathlib import Path

import pytest

from privlens.refinement import load_coded_statements, load_synonyms
from privlens.taxonomy import load_taxonomy

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def seed_path() -> Path:
    return DATA / "taxonomy-v1.seed"


@pytest.fixture(scope="session")
def taxonomy(seed_path):
    return load_taxonomy(seed_path)


@pytest.fixture(scope="session")
def coded_statements():
    return load_coded_statements(DATA / "coded-statements-v1.tsv")


@pytest.fixture(scope="session")
def synonyms():
    return load_synonyms(DATA / "synonyms.tsv")


@pytest.fixture(scope="session")
def chrome_fixture() -> Path:
    return DATA / "fixtures" / "chrome.monorail.csv"


@pytest.fixture(scope="session")
def moodle_fixture() -> Path:
    return DATA / "fixtures" / "moodle.issues.json"
