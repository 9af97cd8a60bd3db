import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from travelwtp.errors import DomainError
from travelwtp.model_core import (
    ExponentialDemand,
    cdf,
    conditional_increment_cdf,
    density,
    discrete_exceedance,
    mean_expenditure,
    per_capita_rwtp,
    survival,
)

SANMARCOS_RATE = 0.0271286
SANMARCOS_A = 0.0211457277071

rates = st.floats(min_value=1e-4, max_value=10.0)


def model(rate=SANMARCOS_RATE, a=SANMARCOS_A, per_mile=None):
    return ExponentialDemand(prefactor_a=a, rate_per_mile=per_mile, rate_per_dollar=rate)


class TestInvariants:
    def test_requires_some_rate(self):
        with pytest.raises(DomainError):
            ExponentialDemand(0.1)

    @pytest.mark.parametrize("kwargs", [
        dict(prefactor_a=0.0, rate_per_dollar=1.0),
        dict(prefactor_a=0.1, rate_per_dollar=-1.0),
        dict(prefactor_a=0.1, rate_per_mile=0.0),
    ])
    def test_nonpositive_parameters(self, kwargs):
        with pytest.raises(DomainError):
            ExponentialDemand(**kwargs)

    def test_cost_per_mile_links_rates(self):
        m = ExponentialDemand(0.02, rate_per_mile=0.013565, rate_per_dollar=0.013565 / 0.5)
        assert m.rate_per_dollar * 0.5 == pytest.approx(m.rate_per_mile, rel=1e-12)
        assert m.cost_per_mile == pytest.approx(0.5, rel=1e-12)

    def test_dollar_rate_required(self):
        with pytest.raises(DomainError, match="cost schedule"):
            cdf(ExponentialDemand(0.02, rate_per_mile=0.01), 1.0)


class TestCdf:
    def test_zero(self):
        assert cdf(model(), 0.0) == 0.0

    def test_at_mean(self):
        assert cdf(model(), 1 / SANMARCOS_RATE) == pytest.approx(1 - math.exp(-1), abs=1e-12)

    def test_against_trapezoid(self):
        u = np.linspace(0.0, 36.86, 200_001)
        oracle = np.trapezoid(SANMARCOS_RATE * np.exp(-SANMARCOS_RATE * u), u)
        assert cdf(model(), 36.86) == pytest.approx(oracle, abs=1e-9)
        assert cdf(model(), 36.86) == pytest.approx(0.632, abs=1e-3)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            cdf(model(), -1.0)

    def test_monotone_and_limit(self):
        w = np.linspace(0, 2000, 500)
        values = cdf(model(), w)
        assert np.all(np.diff(values) >= 0)
        assert values[-1] == pytest.approx(1.0, abs=1e-15)

    def test_density_integrates_to_cdf(self):
        val, _ = integrate.quad(lambda u: density(model(), u), 0, 50)
        assert val == pytest.approx(cdf(model(), 50), rel=1e-10)


class TestSurvival:
    def test_zero(self):
        assert survival(model(), 0.0) == 1.0

    def test_direct(self):
        assert survival(model(0.1), 10.0) == pytest.approx(0.36787944117144233, rel=1e-14)

    def test_matches_discrete_portion_model(self):
        lam = 0.1
        m = 1e-4 / lam
        k = int(round(10.0 / m))
        assert discrete_exceedance(lam, m, k) == pytest.approx(survival(model(lam), 10.0), abs=1e-6)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            survival(model(), -0.5)


class TestMeans:
    def test_mean_sanmarcos(self):
        oracle, _ = integrate.quad(lambda x: x * SANMARCOS_RATE * math.exp(-SANMARCOS_RATE * x), 0, np.inf)
        assert mean_expenditure(model()) == pytest.approx(oracle, rel=1e-8)
        assert mean_expenditure(model()) == pytest.approx(36.8615, abs=1e-4)

    @pytest.mark.parametrize("rate, expected", [(1.0, 1.0), (0.5, 2.0)])
    def test_mean_trivial(self, rate, expected):
        assert mean_expenditure(model(rate)) == expected

    def test_per_capita_sanmarcos(self):
        assert per_capita_rwtp(model()) == pytest.approx(0.77946254901, abs=1e-11)

    def test_per_capita_normalized(self):
        assert per_capita_rwtp(model(0.37, 0.37)) == pytest.approx(1.0, rel=1e-15)

    def test_per_capita_oracle_fit_values(self):
        assert per_capita_rwtp(model(0.027129, 0.021081)) == pytest.approx(0.77707, abs=1e-5)

    def test_per_capita_is_curve_integral(self):
        m = model()
        oracle, _ = integrate.quad(lambda x: m.prefactor_a * math.exp(-SANMARCOS_RATE * x), 0, np.inf)
        assert per_capita_rwtp(m) == pytest.approx(oracle, rel=1e-9)


class TestProperties:
    @given(rates, st.floats(0, 50), st.floats(0, 50))
    def test_memoryless(self, lam, t, z):
        m = model(lam)
        lhs = survival(m, t + z)
        rhs = survival(m, t) * survival(m, z)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    @given(rates, st.floats(0, 1e4))
    def test_cdf_plus_survival(self, lam, w):
        m = model(lam)
        assert cdf(m, w) + survival(m, w) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("lam", [0.01, 0.0271286, 0.5, 3.0])
    def test_conditional_identity_grid(self, lam):
        m = model(lam)
        grid = np.linspace(0, 10 / lam, 41)
        x, z = np.meshgrid(grid, grid[1:])
        got = conditional_increment_cdf(m, x, z)
        np.testing.assert_allclose(got, cdf(m, z), rtol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.01, 2.0), st.integers(1, 2000))
    def test_discrete_limit(self, lam, k):
        portion = 1e-4 / lam
        assert discrete_exceedance(lam, portion, k) == pytest.approx(
            survival(model(lam), k * portion), abs=1e-6
        )

    def test_linear_portion_probability_converges(self):
        # continue probability 1 - lam*m only matches the exponential in the limit
        lam = 0.1
        errors = []
        for m in (1.0, 0.1, 0.01):
            k = int(round(10.0 / m))
            errors.append(abs(discrete_exceedance(lam, m, k, 1 - lam * m) - math.exp(-1)))
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 2e-4
