from functools import lru_cache

import numpy as np
import pytest

from qphase.pipeline import build_setup, example_setup


@lru_cache(maxsize=None)
def setup_for(n: int):
    return build_setup(n)


@lru_cache(maxsize=None)
def example(section: str):
    return example_setup(section)


@pytest.fixture(params=[1, 2, 3], ids=lambda n: f"n{n}")
def small_setup(request):
    return setup_for(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: s.split("criterion")[1]):
            terminalreporter.write_line(line)
