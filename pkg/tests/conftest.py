import pytest

from afqubo.framework import ArgumentationFramework, parse_apx

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

FIG1_APX = """\
arg(a). arg(b). arg(c). arg(d). arg(e).
att(a,b). att(c,b). att(c,d). att(d,c). att(d,e).
"""


@pytest.fixture
def fig1() -> ArgumentationFramework:
    """Five arguments: a->b, c->b, c->d, d->c, d->e."""
    return parse_apx(FIG1_APX)


@pytest.fixture
def cycle3() -> ArgumentationFramework:
    return ArgumentationFramework(["a", "b", "c"], [(0, 1), (1, 2), (2, 0)])
