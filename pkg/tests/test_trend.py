import math

import numpy as np
import pytest

from polydirich.errors import PreconditionError
from polydirich.trend import Classification, divergence_trend, dyadic_degrees, partial_sums_1d

K = np.arange(8193, dtype=float)
NS = dyadic_degrees(8, 13)


def test_harmonic_half():
    terms = 1.0 / (2.0 * (K + 1.0))
    assert float(np.cumsum(terms)[1000]) == pytest.approx(3.7432, abs=1e-4)
    v = divergence_trend(partial_sums_1d(terms, NS))
    assert v.classification is Classification.LOG_DIVERGENT
    assert v.fit_constant == pytest.approx(0.5, rel=0.01)


def test_inverse_squares_converge():
    v = divergence_trend(partial_sums_1d((K + 1.0) ** -2, NS))
    assert v.classification is Classification.CONVERGENT


def test_linear_growth():
    v = divergence_trend([(n, float(n)) for n in NS])
    assert v.classification is Classification.POWER_DIVERGENT
    assert v.exponent == pytest.approx(1.0, abs=0.02)


def test_sqrt_growth():
    v = divergence_trend(partial_sums_1d((K + 1.0) ** -0.5, NS))
    assert v.classification is Classification.POWER_DIVERGENT
    assert v.exponent == pytest.approx(0.5, abs=0.05)


def test_slow_convergence_is_not_called_divergent():
    v = divergence_trend(partial_sums_1d((K + 1.0) ** -1.5, NS))
    assert v.classification is Classification.CONVERGENT


def test_log_log_is_inconclusive_or_log():
    # sum 1/(k log k) grows like log log N: no model should claim a clean power
    k = np.arange(2, 8194, dtype=float)
    terms = np.concatenate([[0.0, 0.0], 1.0 / (k * np.log(k))])
    v = divergence_trend(partial_sums_1d(terms, NS))
    assert v.classification is not Classification.POWER_DIVERGENT


def test_constant_sums_converge():
    v = divergence_trend([(n, 2.0) for n in NS])
    assert v.classification is Classification.CONVERGENT


def test_low_resolution():
    terms = 1.0 / (K + 1.0)
    v = divergence_trend(partial_sums_1d(terms, [16, 32, 64, 128]))
    assert v.classification is Classification.INCONCLUSIVE
    assert "samples" in v.reason
    assert math.isnan(v.fit_constant)


def test_decreasing_sums_not_divergent():
    v = divergence_trend([(n, -math.log(n)) for n in NS])
    assert v.classification is Classification.INCONCLUSIVE


def test_preconditions():
    with pytest.raises(PreconditionError):
        divergence_trend([(1, 1.0), (2, 2.0), (3, 3.0)])
    with pytest.raises(PreconditionError):
        divergence_trend([(4, 1.0), (2, 2.0), (8, 3.0), (16, 4.0)])


def test_dyadic():
    assert dyadic_degrees(8, 10) == [256, 512, 1024]
