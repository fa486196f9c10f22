import random

import pytest

from nilqx.group import heisenberg


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def heis():
    return heisenberg()
