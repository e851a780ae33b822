"""Shared fixtures and the --runslow switch"""

import pytest

from pisigma.algebra.context import get_context
from pisigma.config import get_settings


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the long acceptance identities")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long acceptance identity, needs --runslow")
    config.addinivalue_line("markers", "property: seeded randomized suite")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def ctx():
    return get_context("n")


@pytest.fixture
def param_ctx():
    return get_context("k", ("n",))


@pytest.fixture(scope="session")
def sample_tower():
    """
    n! as product p, the harmonic numbers as sum h, the sign m and the
    alternating harmonic numbers as sum a, with default evaluation data
    """
    from pisigma.evaluation.spec import EvalSpec
    from pisigma.field.extensions import adjoin_pi, adjoin_sigma
    from pisigma.field.ring import RingElem
    from pisigma.field.tower import base_tower

    ctx = get_context("n")
    x = ctx.gen("n")
    tower = adjoin_pi(base_tower(ctx), x + 1, "p")
    tower = adjoin_sigma(tower, RingElem.const(tower, 1 / (x + 1)), "h")
    tower = tower.with_sign()
    tower = adjoin_sigma(tower, RingElem.sign(tower).scale(1 / (x + 1)), "a")
    return tower, EvalSpec()


@pytest.fixture
def random_element(sample_tower):
    """Factory of random ring elements with small rational coefficients"""
    from pisigma.field.ring import RingElem

    tower, _ = sample_tower
    ctx = tower.ctx
    x = ctx.gen("n")

    def make(rng, terms: int = 3, laurent: bool = True):
        result = RingElem.zero(tower)
        for _ in range(rng.randint(1, terms)):
            coeff = ctx.const(rng.randint(-5, 5) or 1) * (x + rng.randint(0, 3))
            if rng.random() < 0.5:
                coeff = coeff / (x + rng.randint(-2, 3))
            term = RingElem.const(tower, coeff)
            for index in tower.pi_indices:
                low = -1 if laurent else 0
                term = term * RingElem.gen(tower, index, rng.randint(low, 1))
            for index in tower.sigma_indices:
                term = term * RingElem.gen(tower, index, rng.randint(0, 2))
            if rng.random() < 0.5:
                term = term * RingElem.sign(tower)
            result = result + term
        return result

    return make
