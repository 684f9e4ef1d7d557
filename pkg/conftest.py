import random

import pytest

from app.models.witt import WittRing


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture
def ring_3_4():
    return WittRing(3, 4)


@pytest.fixture
def ring_9_4():
    """W_4(F_9)"""
    return WittRing(3, 4, f=2)


@pytest.fixture(params=[(3, 1), (3, 2), (5, 1), (5, 2)], ids=lambda pf: f"p{pf[0]}f{pf[1]}")
def any_ring(request):
    p, f = request.param
    return WittRing(p, 4, f)
