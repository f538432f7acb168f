""" Test configuration for zetalab.

The long numerical experiments (zero tables up to large heights, rh-scan grids over several abscissas, the
full operator consistency report, Weyl-remainder fits over many decades) carry the ``slow`` marker and only
run with ``pytest --runslow``. Every test shares one session-wide zero cache under pytest's tmp directory,
so the zero scan runs once and the user's ``~/.cache/zetalab`` is never touched.

The --runslow hooks follow https://docs.pytest.org/en/latest/example/simple.html
"""

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: mark test as slow to run")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        # --runslow given in cli: do not skip slow tests
        return
    skip_slow = pytest.mark.skip(reason="need --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def zero_cache(tmp_path_factory):
    """One cache directory for the whole session, so the zero scan runs once."""
    return tmp_path_factory.mktemp("zero_cache")


@pytest.fixture(autouse=True)
def isolated_cache(zero_cache, monkeypatch):
    monkeypatch.setenv("ZETALAB_CACHE", str(zero_cache))
