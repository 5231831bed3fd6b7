import math

import pytest

from cqpolar.channel import QubitEmbedding

ACCEPTANCE_LINES = []


@pytest.fixture
def emb025():
    return QubitEmbedding.from_energy(0.25)


@pytest.fixture
def gamma025():
    return math.exp(-0.5)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
