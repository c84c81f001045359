"""Shared fixtures: seeded generators and random total families."""
import numpy as np
import pytest

from config.settings import get_settings
from framekit.frames.family import make_family


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Settings are cached; every test starts from the environment it sets up."""
    monkeypatch.delenv("FRAMEKIT_TOL", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_total_family(rng, d=None, count=None, label="random"):
    """d x N Gaussian family with N >= d, total with probability one."""
    d = d or int(rng.integers(1, 17))
    count = count or int(rng.integers(d, 25))
    return make_family(random_complex(rng, d, count), label=label)


@pytest.fixture
def total_family(rng):
    return random_total_family(rng, d=6, count=9)


@pytest.fixture
def upper_family():
    """psi_k = e_k / k at d = 8."""
    return make_family(np.diag(1.0 / np.arange(1, 9)), label="upper")
