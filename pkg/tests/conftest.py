"""Shared fixtures: the three example fields and their embedding tables"""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from sextic_field import embeddings_at  # noqa: E402
from src.config.field_config import load_config  # noqa: E402

CONFIG_DIR = os.path.join(ROOT, "configs")


def config_path(name: str) -> str:
    return os.path.join(CONFIG_DIR, f"{name}.json")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("PIB_BENCHMARKS") == "1":
        return
    skip = pytest.mark.skip(reason="set PIB_BENCHMARKS=1 to run wall-time comparisons")
    for item in items:
        if "benchmark" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def example1_config():
    return load_config(config_path("example1"))


@pytest.fixture(scope="session")
def example2_config():
    return load_config(config_path("example2"))


@pytest.fixture(scope="session")
def example3_config():
    return load_config(config_path("example3"))


@pytest.fixture(scope="session")
def example1(example1_config):
    return example1_config.spec


@pytest.fixture(scope="session")
def example2(example2_config):
    return example2_config.spec


@pytest.fixture(scope="session")
def example3(example3_config):
    return example3_config.spec


@pytest.fixture(scope="session")
def table100(example1):
    return embeddings_at(example1, 100)


@pytest.fixture(scope="session")
def table250(example1):
    return embeddings_at(example1, 250)


@pytest.fixture(scope="session")
def table500(example1):
    return embeddings_at(example1, 500)
