import pytest

from acutesets.exact import QVector

ACCEPTANCE_LINES = []


def qv(*rows):
    return [QVector(r) for r in rows]


@pytest.fixture(scope="session")
def fib_chain():
    """Configurations for d = 1..8 from one deterministic run."""
    from acutesets.fibonacci import fibonacci_construct

    out = {}
    fibonacci_construct(8, on_step=lambda c: out.__setitem__(c.dim, c))
    return out


@pytest.fixture
def triangle():
    return qv((0, 0), (2, 0), (1, 2))


@pytest.fixture
def square():
    return qv((0, 0), (1, 0), (0, 1), (1, 1))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
