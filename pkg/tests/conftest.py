import pytest

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record():
    def rec(n: int, checks: dict[str, bool], detail: str = ""):
        bad = [k for k, v in checks.items() if not v]
        ACCEPTANCE[n] = (not bad, detail if not bad else f"failed: {', '.join(bad)}; {detail}")
        print(f"criterion {n}: {'PASS' if not bad else 'FAIL'} {ACCEPTANCE[n][1]}")
        assert not bad, bad
    return rec
