import os

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(autouse=True, scope="session")
def _cache_dir(tmp_path_factory):
    old = os.environ.get("NAUSLANDER_CACHE_DIR")
    os.environ["NAUSLANDER_CACHE_DIR"] = str(tmp_path_factory.mktemp("cache"))
    yield
    if old is None:
        os.environ.pop("NAUSLANDER_CACHE_DIR", None)
    else:
        os.environ["NAUSLANDER_CACHE_DIR"] = old


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
