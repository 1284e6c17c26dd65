import pytest
from hypothesis import strategies as st

ACCEPTANCE_LINES: list[str] = []


def perms(min_n=1, max_n=8):
    return st.integers(min_n, max_n).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(tuple)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def record(label, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        return passed

    return record
