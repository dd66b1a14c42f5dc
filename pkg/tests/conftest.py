import pytest

from ballq import lattice
from ballq.geometry import Incidence


@pytest.fixture(scope="session")
def atlas(tmp_path_factory):
    return lattice.Atlas(cache_dir=tmp_path_factory.mktemp("ctab"))


@pytest.fixture(scope="session")
def incidence(atlas):
    return Incidence(atlas)


def all_pass(certs):
    bad = [(c.claim, c.computed, c.expected) for c in certs if c.status != "pass"]
    assert not bad, bad


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
