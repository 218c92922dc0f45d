import pytest

from avgorder.subgroup import subgroup


@pytest.fixture(scope="session")
def groups():
    cache = {}

    def get(spec):
        if spec not in cache:
            cache[spec] = subgroup(spec)
        return cache[spec]

    return get


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
