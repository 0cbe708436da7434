import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line; the line is printed even if the test fails."""
    state = {}

    def record(number, title):
        state["number"], state["title"] = number, title
        state["ok"] = False
        return state

    yield record
    if "number" in state:
        status = "PASS" if state["ok"] else "FAIL"
        line = f"{status} criterion {state['number']}: {state['title']}"
        if state.get("detail"):
            line += f" ({state['detail']})"
        ACCEPTANCE_LINES.append(line)
        print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
