import pytest

from ode3lin.kernel import parse

from .strategies import EX31, EX32, EX33


@pytest.fixture
def ex31():
    return parse(EX31)


@pytest.fixture
def ex32():
    return parse(EX32)


@pytest.fixture
def ex33():
    return parse(EX33)


def pytest_terminal_summary(terminalreporter):
    from . import acceptance_log

    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_log.summary_lines():
        terminalreporter.write_line(line)
