import pytest

_REPORT = {}


@pytest.fixture
def acceptance_report():
    return _REPORT


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for criterion in sorted(_REPORT, key=int):
        title, results = _REPORT[criterion]
        if results is None:
            tr.write_line(f"FAIL criterion {criterion}: {title} (check raised)")
            continue
        ok = all(res.passed for res in results)
        tr.write_line(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {title}")
        for res in results:
            tr.write_line(f"    {res.line()}")
