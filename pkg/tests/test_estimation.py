import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from conftest import SANMARCOS_GROUPS, SANMARCOS_WEIGHT
from travelwtp.errors import (
    DegenerateDesignError,
    DegenerateGroupError,
    DomainError,
    InsufficientDataError,
    UnboundedWTPError,
)
from travelwtp.estimation import (
    AcceptanceGroup,
    BandObservation,
    f_right_tail,
    fit_exponential,
    stated_rate_from_groups,
    to_dollar_scale,
)
from travelwtp.ingestion import CostSchedule, band_observations
from travelwtp.model_core import ExponentialDemand

# Hand OLS on the six San Marcos band log-probabilities (sums-of-products formulas),
# computed once and frozen here.
ORACLE_RATE_PER_MILE = 0.013564302705107138
ORACLE_PREFACTOR = 0.021099083259352884
ORACLE_R_SQUARED = 0.8773381117891499
ORACLE_F = 28.609965966969177


def table1_observations(bands):
    return band_observations(bands, SANMARCOS_WEIGHT)


def curve_points(a, r, xs):
    return [BandObservation(x, a * math.exp(-r * x)) for x in xs]


class TestFitExponential:
    def test_table1_against_hand_ols(self, table1_bands):
        model, diag = fit_exponential(table1_observations(table1_bands))
        assert model.rate_per_mile == pytest.approx(ORACLE_RATE_PER_MILE, rel=1e-10)
        assert model.prefactor_a == pytest.approx(ORACLE_PREFACTOR, rel=1e-10)
        assert diag.r_squared == pytest.approx(ORACLE_R_SQUARED, rel=1e-10)
        assert diag.f_statistic == pytest.approx(ORACLE_F, rel=1e-10)
        assert diag.n_points == 6
        assert model.rate_per_dollar is None

    def test_table1_against_linregress(self, table1_bands):
        obs = table1_observations(table1_bands)
        x = [o.distance_midpoint for o in obs]
        y = np.log([o.visit_probability for o in obs])
        ref = stats.linregress(x, y)
        model, diag = fit_exponential(obs)
        assert -model.rate_per_mile == pytest.approx(ref.slope, rel=1e-12)
        assert diag.p_value == pytest.approx(ref.pvalue, rel=1e-8)

    def test_table1_published_diagnostics(self, table1_bands):
        _, diag = fit_exponential(table1_observations(table1_bands))
        assert diag.r_squared == pytest.approx(0.87734, abs=0.002)
        assert diag.p_value == pytest.approx(0.00589, abs=0.0005)

    def test_exact_recovery_three_points(self):
        model, diag = fit_exponential(curve_points(0.5, 0.01, [10, 40, 90]))
        assert model.rate_per_mile == pytest.approx(0.01, rel=1e-10)
        assert model.prefactor_a == pytest.approx(0.5, rel=1e-10)
        assert diag.r_squared == pytest.approx(1.0, abs=1e-10)

    def test_too_few(self):
        with pytest.raises(InsufficientDataError):
            fit_exponential(curve_points(0.5, 0.01, [10, 40]))

    def test_zero_variance(self):
        with pytest.raises(DegenerateDesignError):
            fit_exponential(curve_points(0.5, 0.01, [10, 10, 10]))

    def test_observation_rejects_zero_probability(self):
        with pytest.raises(DomainError):
            BandObservation(30, 0.0)

    def test_diagnostics_relation(self, table1_bands):
        _, d = fit_exponential(table1_observations(table1_bands))
        assert d.f_statistic == pytest.approx(d.r_squared / (1 - d.r_squared) * (d.n_points - 2), rel=1e-10)
        assert 0 <= d.r_squared <= 1 and 0 <= d.p_value <= 1

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(1e-3, 0.5),
        st.floats(1e-4, 0.05),
        st.lists(st.floats(1, 300), min_size=3, max_size=8, unique=True).filter(
            lambda xs: max(xs) - min(xs) > 5
        ),
    )
    def test_exact_curve_recovered(self, a, r, xs):
        pts = [p for p in curve_points(a, r, xs)]
        if any(not 0 < p.visit_probability < 1 for p in pts):
            return
        model, diag = fit_exponential(pts)
        assert model.rate_per_mile == pytest.approx(r, rel=1e-8)
        assert model.prefactor_a == pytest.approx(a, rel=1e-8)
        assert diag.r_squared == pytest.approx(1.0, abs=1e-10)

    @given(st.floats(0.1, 10.0))
    def test_scale_covariance(self, s):
        rng = np.random.default_rng(3)
        xs = np.array([30, 110, 150, 190, 230, 270.0])
        ps = 0.02 * np.exp(-0.0136 * xs) * np.exp(rng.normal(0, 0.3, xs.size))
        base, dbase = fit_exponential([BandObservation(x, p) for x, p in zip(xs, ps)])
        scaled, dscaled = fit_exponential([BandObservation(x * s, p) for x, p in zip(xs, ps)])
        assert scaled.rate_per_mile == pytest.approx(base.rate_per_mile / s, rel=1e-9)
        assert scaled.prefactor_a == pytest.approx(base.prefactor_a, rel=1e-9)
        assert dscaled.r_squared == pytest.approx(dbase.r_squared, rel=1e-9)

    def test_increasing_visitation_rejected(self):
        with pytest.raises(DomainError):
            fit_exponential([BandObservation(x, 0.001 * (1 + x / 100)) for x in (10, 50, 90)])


class TestDollarScale:
    def test_sanmarcos_cost(self):
        m = to_dollar_scale(ExponentialDemand(0.02108, rate_per_mile=0.013565),
                            CostSchedule(effective_cost_per_mile=0.5))
        assert m.rate_per_dollar == pytest.approx(0.027130, abs=1e-9)
        assert m.rate_per_dollar == pytest.approx(0.0271286, abs=3e-4)
        assert m.prefactor_a == 0.02108

    def test_unit_cost(self):
        m = to_dollar_scale(ExponentialDemand(0.02, rate_per_mile=0.0271286),
                            CostSchedule(effective_cost_per_mile=1.0))
        assert m.rate_per_dollar == 0.0271286

    def test_fuel_arithmetic_default(self):
        sched = CostSchedule(gas_price=4.0, fuel_economy=20.8)
        assert sched.cost_per_mile == pytest.approx(4.0 / 20.8)

    def test_needs_mile_rate(self):
        with pytest.raises(DomainError):
            to_dollar_scale(ExponentialDemand(0.02, rate_per_dollar=0.02), CostSchedule())


class TestStatedRate:
    def test_sanmarcos_geometric_mean(self, sanmarcos_groups):
        est = stated_rate_from_groups(sanmarcos_groups)
        assert est.geometric_mean_acceptance == pytest.approx(0.6673615, abs=1e-6)
        assert est.n_total == 167

    def test_sanmarcos_mean_wtp(self, sanmarcos_groups):
        # log-sum oracle, independent of the implementation's loop
        n = np.array([g[0] for g in SANMARCOS_GROUPS], float)
        k = np.array([g[1] for g in SANMARCOS_GROUPS], float)
        oracle = 4.7831196 / -(np.sum(n * np.log(k / n)) / n.sum())
        est = stated_rate_from_groups(sanmarcos_groups)
        assert est.stated_mean_wtp == pytest.approx(oracle, rel=1e-12)
        assert est.stated_mean_wtp == pytest.approx(11.827, abs=1e-3)

    def test_override_mean_delta(self):
        groups = [AcceptanceGroup(n, k, 1.0) for n, k in SANMARCOS_GROUPS]
        est = stated_rate_from_groups(groups, mean_delta=4.7831196)
        assert est.mean_delta == 4.7831196
        assert est.stated_mean_wtp == pytest.approx(11.827, abs=1e-3)

    def test_single_group_inversion(self):
        # p = 1/e with 1 dollar extra cost gives a mean of exactly 1 in the limit
        g = AcceptanceGroup(100_000_000, round(100_000_000 * math.exp(-1)), 1.0)
        assert stated_rate_from_groups([g]).stated_mean_wtp == pytest.approx(1.0, rel=1e-8)

    def test_zero_acceptors_named(self):
        groups = [AcceptanceGroup(10, 5, 1.0), AcceptanceGroup(4, 0, 2.0)]
        with pytest.raises(DegenerateGroupError) as info:
            stated_rate_from_groups(groups)
        assert info.value.group_index == 1

    def test_all_accept_is_unbounded(self):
        with pytest.raises(UnboundedWTPError):
            stated_rate_from_groups([AcceptanceGroup(5, 5, 1.0), AcceptanceGroup(3, 3, 2.0)])

    def test_empty(self):
        with pytest.raises(InsufficientDataError):
            stated_rate_from_groups([])

    @given(
        st.floats(1e-3, 2.0),
        st.lists(st.tuples(st.integers(1, 500), st.floats(0.05, 20.0)), min_size=1, max_size=10),
    )
    def test_identity_recovers_rate(self, lam, layout):
        # exact shares p_i = exp(-lam * delta_i) bypass integer counts
        n = np.array([g[0] for g in layout], float)
        d = np.array([g[1] for g in layout])
        log_g = np.sum(n * (-lam * d)) / n.sum()
        delta = np.sum(n * d) / n.sum()
        assert delta / -log_g == pytest.approx(1 / lam, rel=1e-10)

    @given(
        st.floats(1e-3, 2.0),
        st.lists(
            st.tuples(st.integers(2, 400), st.floats(0.01, 0.99)), min_size=1, max_size=10
        ),
    )
    def test_identity_through_groups(self, lam, layout):
        # pick each extra cost so the integer share equals exp(-lam * delta) exactly
        groups = []
        for n, frac in layout:
            k = min(n - 1, max(1, round(n * frac)))
            groups.append(AcceptanceGroup(n, k, -math.log(k / n) / lam))
        est = stated_rate_from_groups(groups)
        assert est.stated_mean_wtp == pytest.approx(1 / lam, rel=1e-10)


class TestFTail:
    def test_zero(self):
        for d1, d2 in [(1, 1), (1, 4), (3, 17)]:
            assert f_right_tail(0.0, d1, d2) == 1.0

    def test_median_f11(self):
        assert f_right_tail(1.0, 1, 1) == pytest.approx(0.5, abs=1e-12)

    def test_sanmarcos_value(self):
        assert f_right_tail(28.62, 1, 4) == pytest.approx(0.0059, abs=5e-5)

    @pytest.mark.parametrize("nu", [1, 2, 4, 10, 37, 100])
    @pytest.mark.parametrize("f", [0.1, 1.0, 4.0, 28.62, 150.0])
    def test_against_students_t(self, f, nu):
        oracle = 2 * stats.t.sf(math.sqrt(f), nu)
        assert f_right_tail(f, 1, nu) == pytest.approx(oracle, abs=1e-8)

    def test_bad_dof(self):
        with pytest.raises(DomainError):
            f_right_tail(1.0, 0, 4)
        with pytest.raises(DomainError):
            f_right_tail(-1.0, 1, 4)
