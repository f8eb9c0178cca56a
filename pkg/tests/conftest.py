import pytest

from taulab.tau import build_tau_table

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def table_1e4():
    return build_tau_table(10**4)


@pytest.fixture(scope="session")
def table_1e6():
    return build_tau_table(10**6)


@pytest.fixture(scope="session")
def table_1e5(table_1e6):
    from taulab.tau import TauTable

    return TauTable(10**5, table_1e6.values[: 10**5])


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Usage: ``with criterion(3, "Lucas cross-check") as detail: ...``; the
    line is FAIL if the block raises.
    """

    class _Recorder:
        def __init__(self, number, title):
            self.number, self.title = number, title
            self.detail = ""

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            status = "PASS" if exc_type is None else "FAIL"
            line = f"[{status}] criterion {self.number:>2}: {self.title}"
            if self.detail:
                line += f" ({self.detail})"
            ACCEPTANCE_LINES.append(line)
            print(line)
            return False

    return _Recorder


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
