from pathlib import Path

import pytest

from ontoquery.config import load_deployment
from ontoquery.runtime import Runtime

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def deployment():
    return load_deployment(FIXTURES / "deployment.toml")


@pytest.fixture(scope="session")
def runtime(deployment):
    # Shared across the whole run; tests that reload datasets or mutate
    # sessions build their own runtime instead.
    return Runtime.load(deployment)


@pytest.fixture(scope="session")
def schema(runtime):
    return runtime.schema


@pytest.fixture(scope="session")
def closure(runtime):
    return runtime.closure


@pytest.fixture(scope="session")
def store(runtime):
    return runtime.store


@pytest.fixture()
def fresh_runtime(deployment):
    return Runtime.load(deployment)
