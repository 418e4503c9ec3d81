import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)
sys.path.insert(0, os.path.join(ROOT, "scripts"))

from catalog.store import CatalogStore  # noqa: E402
from matrices.genmat import DIAGONAL_FIRST, FULL_GENERIC, make_context  # noqa: E402

CONFIG = os.path.join(ROOT, "config.yaml")


@pytest.fixture(scope="session")
def config_path():
    return CONFIG


@pytest.fixture(scope="session")
def store():
    return CatalogStore(CONFIG)


@pytest.fixture(scope="session")
def ctx2():
    return make_context(2, DIAGONAL_FIRST)


@pytest.fixture(scope="session")
def ctx3():
    return make_context(3, DIAGONAL_FIRST)


@pytest.fixture(scope="session")
def ctx3_full():
    return make_context(3, FULL_GENERIC)


@pytest.fixture(scope="session")
def ctx4():
    return make_context(4, DIAGONAL_FIRST)


@pytest.fixture
def isolated_env(monkeypatch, tmp_path):
    """No .env or TRACEALG_* leakage, working directory in tmp_path."""
    monkeypatch.delenv("TRACEALG_CONFIG", raising=False)
    monkeypatch.delenv("TRACEALG_WORKERS", raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path
