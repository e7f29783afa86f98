# File: tests/conftest.py
# Description: Shared pytest configuration and fixtures

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from ga_tools.core import RandomStream  # noqa: E402
from ga_tools.problems import OneMax, RoyalRoad, ToyNPO, TriangleVCP  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: scaling and acceptance runs taking minutes")


@pytest.fixture
def data_dir():
    """Directory holding the shipped ToyNPO instance files"""
    return os.path.join(ROOT, 'data', 'toy')


@pytest.fixture
def rng():
    return RandomStream(12345)


@pytest.fixture
def rr8():
    return RoyalRoad(8, 2)


@pytest.fixture
def vcp2():
    return TriangleVCP(2)


@pytest.fixture
def onemax8():
    return OneMax(8)


@pytest.fixture
def toy3():
    return ToyNPO.toy3()
