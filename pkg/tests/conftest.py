import pytest

from voalab.vertex import set_block_cache

ACCEPTANCE_LINES = []


@pytest.fixture(autouse=True)
def _no_block_cache():
    set_block_cache(None)
    yield
    set_block_cache(None)


@pytest.fixture
def record_criterion():
    """Collect one PASS/FAIL line per acceptance criterion for the terminal summary."""
    def record(number, title, ok, seconds):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} ({seconds:.1f} s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
