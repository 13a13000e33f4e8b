import pytest

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    def _record(name: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE.append((name, bool(ok), detail))
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name} {detail}".rstrip())
