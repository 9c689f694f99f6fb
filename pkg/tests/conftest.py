import functools

import pytest

from grmpd.grm_code import build_code

ACCEPTANCE_RESULTS = []


@functools.lru_cache(maxsize=None)
def cached_code(q, m, rho=1, method="auto"):
    return build_code(q, m, rho, method=method)


@pytest.fixture
def code_of():
    return cached_code


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
