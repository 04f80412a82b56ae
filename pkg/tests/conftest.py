import pytest

from fieldcarpet.finite_field import FieldSpec

# M_2 for p = 3, m = 1 (entries -1 written as 2).
M2_P3_M1 = [
    [1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 0, 2, 1, 0, 2, 1, 0, 2],
    [1, 2, 1, 1, 2, 1, 1, 2, 1],
    [1, 1, 1, 0, 0, 0, 2, 2, 2],
    [1, 0, 2, 0, 0, 0, 2, 0, 1],
    [1, 2, 1, 0, 0, 0, 2, 1, 2],
    [1, 1, 1, 2, 2, 2, 1, 1, 1],
    [1, 0, 2, 2, 0, 1, 1, 0, 2],
    [1, 2, 1, 2, 1, 2, 1, 2, 1],
]

# Zero set of F(13, 1): the cross plus four sporadic zeros.
F13_M1_ZEROS = {
    (1, 6), (2, 2), (2, 10), (3, 6), (5, 6),
    (6, 1), (6, 3), (6, 5), (6, 7), (6, 9), (6, 11),
    (7, 6), (9, 6), (10, 2), (10, 10), (11, 6),
}

# Canonical m in GF(361) = GF(19)[x]/(x^2 + 1) whose carpets have holes.
GF361_HOLE_LIST = [0, 1, 2, 3, 4, 6, 7, 8, 9, 14, 19, 21, 35, 47, 52, 53, 56, 63, 69, 76, 78,
                   88, 92, 102, 130, 136, 137, 148, 168]


@pytest.fixture
def gf3():
    return FieldSpec(3)


@pytest.fixture
def gf9():
    return FieldSpec(3, 2, (1, 0, 1))


@pytest.fixture
def gf361():
    return FieldSpec.parse("19^2/1,0,1")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion" in nodeid and rep.when == "call":
                lines.append((nodeid.split("::")[-1], "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")
