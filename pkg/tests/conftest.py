import numpy as np
import pytest

from polydirich.series import TruncatedSeries


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def disc_coeffs(rng, shape, scale=True):
    """Complex coefficients uniform in the unit disc, optionally damped by 1/((k+1)(l+1))."""
    r = np.sqrt(rng.uniform(size=shape))
    c = r * np.exp(2j * np.pi * rng.uniform(size=shape))
    if scale and len(shape) == 2:
        c = c / np.outer(np.arange(1, shape[0] + 1.0), np.arange(1, shape[1] + 1.0))
    return c


def rand_series(rng, dz, dw, scale=True):
    return TruncatedSeries(disc_coeffs(rng, (dz + 1, dw + 1), scale))
