import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, derandomize=True)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def corpus():
    from helpers import corpus as load

    return load()


def pytest_terminal_summary(terminalreporter):
    import helpers

    if helpers.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in helpers.acceptance_lines:
            terminalreporter.write_line(line)
