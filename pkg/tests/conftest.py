import pytest

from mka import load_graph_file
from mka.experiment import bundled
from mka.pipeline import load_kps_file


@pytest.fixture(scope="session")
def cardio():
    return load_graph_file(bundled("cardiology.tsv"))


@pytest.fixture(scope="session")
def toy_kg():
    return load_graph_file(bundled("toy_kg.tsv"))


@pytest.fixture(scope="session")
def kps():
    return load_kps_file(bundled("kps.json"))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
