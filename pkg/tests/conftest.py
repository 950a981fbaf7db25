import pytest

DEFAULT_SEED = 0


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED, help="seed for the randomized acceptance checks")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")
