import random

import pytest

from bifix import conflicts, semigroups
from bifix.transmap import Transformation


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False,
                     help="run the n=8 closure and other expensive checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: needs --slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("bifix-cache")


@pytest.fixture(scope="session")
def bbf6():
    return semigroups.enumerate_bbf(6)


@pytest.fixture(scope="session")
def bbf7():
    return semigroups.enumerate_bbf(7)


@pytest.fixture(scope="session")
def prune7(cache_dir):
    return conflicts.prune(7, cache_dir=cache_dir)


def random_map(rng: random.Random, n: int) -> Transformation:
    return Transformation(rng.randrange(n) for _ in range(n))


def random_bbf(rng: random.Random, n: int) -> Transformation:
    from bifix.automata import _random_bbf_letter

    return _random_bbf_letter(n, rng)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES = []


def record(criterion: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
