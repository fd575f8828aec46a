import random

import pytest

from iwarank.lambda_ring import PrimeContext


@pytest.fixture
def ctx3() -> PrimeContext:
    return PrimeContext(3)


@pytest.fixture
def ctx5() -> PrimeContext:
    return PrimeContext(5)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
