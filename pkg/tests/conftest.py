import pytest

from rpq import data_path, parse_automaton, parse_database


@pytest.fixture(scope="session")
def roads():
    return parse_database(data_path("roads.graph").read_text())


@pytest.fixture(scope="session")
def q2_auto():
    return parse_automaton(data_path("q2.auto").read_text())


Q1 = "(Road + Ferry)*"
Q2 = "(Road + Ferry)* Gas (Road + Ferry)*"
W1 = "s -e1-> c1 -e2-> c2 -e3-> c3 -e7-> c3 -e4-> c1 -e2-> c2 -e5-> t"
W_LOOP = "s -e1-> c1 -e2-> c2 -e3-> c3 -e4-> c1 -e2-> c2 -e5-> t"


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
