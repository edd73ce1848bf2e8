from pathlib import Path

import pytest

from corpusforge.pipeline import load_inputs, run_pipeline

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def mini_repo() -> Path:
    return FIXTURES / "mini_repo"


@pytest.fixture(scope="session")
def pipeline_result(mini_repo):
    return run_pipeline(load_inputs(mini_repo))


@pytest.fixture(scope="session")
def corpus_files(pipeline_result):
    """Kept, cleaned C/C++ files of the fixture repo."""
    return [f for f in pipeline_result.kept if f.language in ("C", "CPP")]
