import numpy as np
import pytest

from tools.relinfo import (
    ri_closed_form, ri_curve, ri_minimize, strategy_information, strategy_performance, symmetric_strategy,
    tradeoff_curve, utility_treasure_matrix,
)
from utils.errors import ConvergenceError, InfeasibleUtilityError, InvalidDistributionError

UNIFORM_10 = np.full(10, 0.1)


def test_identity_strategy_is_perfect():
    U = utility_treasure_matrix(10)
    assert strategy_performance(np.eye(10), U, UNIFORM_10) == pytest.approx(1.0)
    assert strategy_information(np.eye(10), UNIFORM_10) == pytest.approx(np.log2(10))


def test_uniform_strategy_is_chance_level():
    U = utility_treasure_matrix(10)
    strategy = np.full((10, 10), 0.1)
    assert strategy_performance(strategy, U, UNIFORM_10) == pytest.approx(0.1)
    assert strategy_information(strategy, UNIFORM_10) == pytest.approx(0.0, abs=1e-12)


def test_strategy_columns_must_be_distributions():
    with pytest.raises(InvalidDistributionError):
        strategy_performance(np.full((10, 10), 0.2), utility_treasure_matrix(10), UNIFORM_10)


def test_symmetric_strategy_columns():
    strategy = symmetric_strategy(0.3, 5)
    np.testing.assert_allclose(strategy.sum(axis=0), 1.0)
    assert strategy[2, 2] == pytest.approx(0.3)
    assert strategy[0, 2] == pytest.approx(0.175)


class TestClosedForm:
    def test_chance_level_needs_nothing(self):
        assert ri_closed_form(0.1, 10) == 0.0
        assert ri_closed_form(0.05, 10) == 0.0

    def test_perfect_performance(self):
        assert ri_closed_form(1.0, 10) == pytest.approx(np.log2(10), abs=1e-9)

    def test_intermediate_level(self):
        assert ri_closed_form(0.3, 10) == pytest.approx(0.2216, abs=1e-4)

    def test_calibrated_hit_fraction(self):
        assert ri_closed_form(0.18028, 10) == pytest.approx(0.042, abs=0.002)

    def test_monotone_above_chance(self):
        curve = ri_curve(np.linspace(0.1, 1.0, 200), 10)
        assert all(b >= a for a, b in zip(curve, curve[1:]))

    @pytest.mark.parametrize("u, n", [(1.5, 10), (-0.1, 10), (0.5, 1)])
    def test_rejects_bad_input(self, u, n):
        with pytest.raises(ValueError):
            ri_closed_form(u, n)

    def test_lower_bounds_every_strategy(self, rng):
        U = utility_treasure_matrix(6)
        prior = np.full(6, 1 / 6)
        for _ in range(300):
            strategy = rng.dirichlet(np.full(6, 0.5), size=6).T
            u = strategy_performance(strategy, U, prior)
            assert strategy_information(strategy, prior) >= ri_closed_form(u, 6) - 1e-9


class TestSolver:
    def test_chance_level_is_free(self):
        point = ri_minimize(utility_treasure_matrix(10), UNIFORM_10, 0.1)
        assert point.information == 0.0
        assert point.utility == pytest.approx(0.1)

    def test_perfect_performance(self):
        point = ri_minimize(utility_treasure_matrix(10), UNIFORM_10, 1.0)
        assert point.information == pytest.approx(np.log2(10), abs=1e-4)

    @pytest.mark.parametrize("n", [2, 3, 5, 10])
    def test_matches_closed_form(self, n):
        U = utility_treasure_matrix(n)
        prior = np.full(n, 1.0 / n)
        for u in np.arange(0.15, 0.96, 0.05):
            point = ri_minimize(U, prior, float(u))
            assert point.information == pytest.approx(ri_closed_form(float(u), n), abs=1e-3)
            assert point.utility >= u - 1e-6
            np.testing.assert_allclose(point.strategy.sum(axis=0), 1.0, atol=1e-9)

    def test_infeasible_level(self):
        with pytest.raises(InfeasibleUtilityError) as excinfo:
            ri_minimize(utility_treasure_matrix(10), UNIFORM_10, 1.2)
        assert excinfo.value.achievable == pytest.approx(1.0)

    def test_infeasible_for_scaled_utility(self):
        with pytest.raises(InfeasibleUtilityError):
            ri_minimize(0.5 * utility_treasure_matrix(4), np.full(4, 0.25), 0.8)

    def test_non_uniform_prior_constant_action(self):
        prior = np.array([0.7, 0.1, 0.1, 0.1])
        point = ri_minimize(utility_treasure_matrix(4), prior, 0.6)
        assert point.information == 0.0
        assert point.strategy[0].tolist() == [1.0, 1.0, 1.0, 1.0]

    def test_iteration_cap_raises_with_last_iterate(self):
        with pytest.raises(ConvergenceError) as excinfo:
            ri_minimize(utility_treasure_matrix(10), UNIFORM_10, 0.5, max_iter=1)
        assert excinfo.value.last_strategy.shape == (10, 10)

    def test_tradeoff_curve_increases(self):
        points = tradeoff_curve(utility_treasure_matrix(5), np.full(5, 0.2), [0.3, 0.5, 0.7, 0.9])
        informations = [p.information for p in points]
        assert informations == sorted(informations)
