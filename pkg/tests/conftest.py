from __future__ import annotations

import numpy as np
import pytest

from betafrac.harness.corpus import corpus_by_name
from betafrac.jets import FunctionModel

# one pass/fail line per acceptance criterion, filled by test_acceptance
CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def corpus():
    return corpus_by_name()


@pytest.fixture(scope="session")
def model(corpus):
    def get(name: str, beta: float = 1.0) -> FunctionModel:
        return corpus[name].model(beta)

    return get


@pytest.fixture(scope="session")
def exp_model():
    return FunctionModel.from_rule("exp", lambda t: t.exp(), np.exp)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
