import numpy as np
import pytest

from beurling_lab import arith


@pytest.fixture(scope="session")
def table_1e6():
    return arith.sieve_mobius(10**6)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


# acceptance tests append "PASS|FAIL  <criterion>  <detail>" lines here
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
