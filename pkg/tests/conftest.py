import functools

import pytest

from hardwall.kernel import build_context
from hardwall.potential import HardWallEnsemble, ginibre

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def ginibre_ctx(N, alpha=0.0, rho_star=0.8):
    return build_context(HardWallEnsemble(ginibre(), rho_star, alpha, N))


@pytest.fixture
def ctx_factory():
    return ginibre_ctx


@pytest.fixture
def record():
    def _record(tag, ok, detail):
        line = f"criterion {tag}: {'PASS' if ok else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
