import os

import pytest
from hypothesis import settings

from graphmalcev import algebra as A
from graphmalcev import fixtures

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def z2():
    return A.z2()


@pytest.fixture
def chain2():
    return A.chain(2)


@pytest.fixture
def chain3():
    return A.chain(3)


@pytest.fixture
def set3():
    return A.set_algebra(3)


@pytest.fixture
def perm_g():
    return fixtures.perm_g()


@pytest.fixture
def perm_h():
    return fixtures.perm_h()


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, title, secs, limit = RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title} ({secs:.2f}s, limit {limit}s)")
