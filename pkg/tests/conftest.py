import re

import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record one summary line per criterion; printed at the end of the run."""
    lines = request.config.stash[_LINES_KEY]

    def record(number, title, ok, detail, seconds):
        status = "PASS" if ok else "FAIL"
        lines.append(f"criterion {str(number):>3}  {status}  {title}  ({seconds:.1f} s)  {detail}")
        print(lines[-1])

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: (int(re.match(r"\d+", s.split()[1]).group()), s)):
            terminalreporter.write_line(line)
