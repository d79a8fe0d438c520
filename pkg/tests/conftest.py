import random

import pytest

from dgkit.fields import QQ, GF


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(params=["Q", "F7"])
def field(request):
    return QQ if request.param == "Q" else GF(7)
