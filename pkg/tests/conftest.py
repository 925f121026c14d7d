import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toricgit.actions import Linearization, SubtorusAction
from toricgit.fans import DivisorGroup, ToricDivisor, validate_fan


@pytest.fixture
def quadric_fan():
    return validate_fan(3, [(1, 0, 0), (0, 1, 0), (0, 1, 1), (1, 0, 1)],
                        [[0, 1, 2, 3]])


@pytest.fixture
def quadric_action():
    return SubtorusAction.from_columns([(2, 1, 1), (0, 2, 1)], 3)


@pytest.fixture
def quadric_divisor():
    return ToricDivisor((-1, 0, 4, 7))


@pytest.fixture
def plane_fan():
    return validate_fan(2, [(1, 0), (0, 1)], [[0, 1]])


@pytest.fixture
def hyperbolic_action():
    return SubtorusAction.from_columns([(1, -1)], 2)


@pytest.fixture
def div_z():
    return ToricDivisor((1, 0))


@pytest.fixture
def p1_fan():
    return validate_fan(1, [(1,), (-1,)], [[0], [1]])
