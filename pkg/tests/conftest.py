import pytest

_RESULTS = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict: ``criterion(num, title, ok, detail)``."""
    results = request.config.stash.setdefault(_RESULTS, [])

    def record(num, title, ok, detail=""):
        results.append((num, title, ok, detail))
        assert ok, f"AC{num} {title}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(results, key=lambda r: r[0]):
        line = f"[{'PASS' if ok else 'FAIL'}] AC{num:<2} {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
