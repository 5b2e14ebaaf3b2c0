from fractions import Fraction

import pytest

ALPHAS = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)]


@pytest.fixture(params=ALPHAS, ids=lambda a: f"alpha={a}")
def alpha(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s[2:4])):
            terminalreporter.write_line(line)
