import pytest
from hypothesis import settings

from corpus import random_m_presentations

# exact rational arithmetic makes some examples slow; timing is not under test
settings.register_profile("relator_lab", deadline=None)
settings.load_profile("relator_lab")

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def corpus():
    return random_m_presentations(100)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
