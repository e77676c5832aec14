from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from plantutor.envs import load_builtin


@pytest.fixture(scope="session")
def registry():
    return load_builtin()


@pytest.fixture(scope="session")
def hanoi(registry):
    return registry.get("hanoi")


@pytest.fixture(scope="session")
def hanoi_task(hanoi):
    return hanoi.grounded()


@pytest.fixture(scope="session")
def coffee(registry):
    return registry.get("coffee_shop")


@pytest.fixture(scope="session")
def coffee_task(coffee):
    return coffee.grounded()
