import pytest

from moranslice import kernels
from moranslice.carpet import MoranSequence
from moranslice.slicing import Slope

ACCEPTANCE_LINES: list[str] = []

BACKENDS = ["python"] + (["compiled"] if kernels.HAVE_COMPILED else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def seq(text):
    return MoranSequence.parse(text)


def slope(text):
    return Slope.parse(text)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
