import pytest

from nsleak.uv import JointRange


@pytest.fixture
def asym3():
    return JointRange(("X", "Y"), [("x1", "y1"), ("x2", "y1"), ("x3", "y2")])


@pytest.fixture
def product22():
    return JointRange(("X", "Y"), [(x, y) for x in ("x1", "x2") for y in ("y1", "y2")])


@pytest.fixture
def chain_example():
    return JointRange(("X", "Y"), [("x1", "y1"), ("x2", "y1"), ("x2", "y2"),
                                   ("x3", "y2"), ("x4", "y3")])


@pytest.fixture
def diagonal():
    return JointRange(("X", "Y"), [(i, i) for i in range(5)])


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
