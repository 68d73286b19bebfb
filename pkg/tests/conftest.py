import mpmath
import pytest
from hypothesis import settings

from qlaurent.qcore import canonical_params, random_params

settings.register_profile("qlaurent", deadline=None, max_examples=25)
settings.load_profile("qlaurent")

RANDOM_SEEDS = (1, 2, 3, 4)


@pytest.fixture(autouse=True)
def sixty_digits():
    with mpmath.workdps(60):
        yield


@pytest.fixture
def canon():
    return canonical_params()


@pytest.fixture(params=RANDOM_SEEDS, ids=lambda s: f"seed{s}")
def rand_params(request):
    with mpmath.workdps(60):
        return random_params(request.param)
