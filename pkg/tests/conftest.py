import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from heilbronn_lab.core_arith import PrimeContext, build_gamma  # noqa: E402


@pytest.fixture(scope="session")
def ctx5():
    return PrimeContext(5)


@pytest.fixture(scope="session")
def gamma5(ctx5):
    return build_gamma(ctx5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
