from pathlib import Path

import pytest

from defcsp.dsl import load

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture
def corpus():
    return CORPUS


@pytest.fixture
def example1():
    return load(CORPUS / "example1.csp").instance
