import pytest

ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run full-scale slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="full-scale run; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance check, then assert it."""
    def record(number: int, label: str, ok: bool, detail: str = ""):
        ACCEPTANCE.setdefault(number, []).append((label, bool(ok), detail))
        assert ok, f"criterion {number} ({label}): {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        status = "PASS" if all(ok for _, ok, _ in checks) else "FAIL"
        tr.write_line(f"criterion {number:2d}: {status}")
        for label, ok, detail in checks:
            tr.write_line(f"    [{'ok' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else ""))
