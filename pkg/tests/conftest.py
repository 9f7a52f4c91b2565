import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for the acceptance summary, then assert it."""
    lines = request.config.stash[_LINES_KEY]

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}  {title}"
        if detail:
            line += f"  ({detail})"
        lines.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
