import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from osalgebra import corpus  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=[e.name for e in corpus.plain_matroids()])
def corpus_entry(request):
    return corpus.get(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
