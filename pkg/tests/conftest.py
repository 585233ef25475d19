import random

import pytest

from witt import RingParams


@pytest.fixture
def p3():
    """Z_3 modulo 3^16"""
    return RingParams.create(3, 1, 16)


@pytest.fixture
def p3_wide():
    return RingParams.create(3, 1, 32)


@pytest.fixture
def p2_cubic():
    """W(F_8) modulo 2^10"""
    return RingParams.create(2, 3, 10)


@pytest.fixture
def rng():
    return random.Random(0)
