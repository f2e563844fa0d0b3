import pytest

from superjac import FieldSpec, RingContext, parse_map

QQ = FieldSpec.rationals()
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)
F9 = FieldSpec.extension(3, (1, 0, 1))  # t^2 + 1

A_TEXT = """ring m=1 n=2 field=Q
x1 -> x1 + xi1*xi2
xi1 -> xi1
xi2 -> xi2
"""

B_TEXT = """ring m=2 n=2 field=Q
x1 -> x1 + x2^2
x2 -> x2
xi1 -> xi1 + x1*xi2
xi2 -> xi2
"""

TRAP_TEXT = """ring m=1 n=0 field=Fp:3
x1 -> x1 + x1^3
"""

SQUARE_TEXT = """ring m=1 n=0 field=Q
x1 -> x1^2
"""


@pytest.fixture
def endo_a():
    return parse_map(A_TEXT)


@pytest.fixture
def endo_b():
    return parse_map(B_TEXT)


@pytest.fixture
def trap():
    return parse_map(TRAP_TEXT)


@pytest.fixture
def square():
    return parse_map(SQUARE_TEXT)


def ring(m, n, field=QQ):
    return RingContext(m, n, field)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
