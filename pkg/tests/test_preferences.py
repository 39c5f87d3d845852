import numpy as np
import pytest

from aegis.errors import DomainError
from aegis.numerics import central_diff
from aegis.preferences import UtilityFunction

CONCAVE = [
    UtilityFunction.cara(0.5),
    UtilityFunction.cara(2.0),
    UtilityFunction.crra(0.5),
    UtilityFunction.crra(2.0),
    UtilityFunction.crra(3.0),
    UtilityFunction.log(),
]


class TestClosedForms:
    def test_log_at_one(self):
        assert UtilityFunction.log().evaluate(1.0) == 0.0

    def test_cara_at_zero(self):
        assert UtilityFunction.cara(1.0).evaluate(0.0) == -1.0

    def test_crra_two_at_two(self):
        assert UtilityFunction.crra(2.0).evaluate(2.0) == pytest.approx(-0.5)

    def test_linear_identity(self):
        assert UtilityFunction.linear().evaluate(3.7) == 3.7

    def test_log_marginal(self):
        assert UtilityFunction.log().marginal(2.0) == pytest.approx(0.5)

    def test_cara_derivatives_at_zero(self):
        u = UtilityFunction.cara(2.0)
        assert u.marginal(0.0) == pytest.approx(2.0)
        assert u.second(0.0) == pytest.approx(-4.0)

    def test_crra_three_derivatives_at_one(self):
        u = UtilityFunction.crra(3.0)
        assert u.marginal(1.0) == pytest.approx(1.0)
        assert u.second(1.0) == pytest.approx(-3.0)


class TestRiskAversionMeasures:
    def test_cara_absolute_constant(self):
        u = UtilityFunction.cara(0.5)
        for w in (-1.0, 0.0, 3.0, 100.0):
            assert u.absolute_risk_aversion(w) == 0.5

    def test_crra_absolute(self):
        assert UtilityFunction.crra(2.0).absolute_risk_aversion(4.0) == pytest.approx(0.5)

    def test_log_absolute(self):
        assert UtilityFunction.log().absolute_risk_aversion(10.0) == pytest.approx(0.1)

    def test_crra_relative_exact(self):
        u = UtilityFunction.crra(2.0)
        for w in (0.1, 1.0, 42.0):
            assert u.relative_risk_aversion(w) == 2.0

    def test_log_relative_exact(self):
        u = UtilityFunction.log()
        for w in (0.1, 1.0, 42.0):
            assert u.relative_risk_aversion(w) == 1.0

    def test_cara_relative_scales_with_wealth(self):
        assert UtilityFunction.cara(0.1).relative_risk_aversion(30.0) == pytest.approx(3.0)

    def test_ara_derivative_closed_forms(self):
        assert UtilityFunction.cara(1.5).ara_derivative(7.0) == 0.0
        assert UtilityFunction.crra(2.0).ara_derivative(2.0) == pytest.approx(-0.5)
        assert UtilityFunction.log().ara_derivative(1.0) == pytest.approx(-1.0)

    def test_decreasing_absolute_risk_aversion(self):
        ws = np.linspace(0.2, 20.0, 200)
        for u in (UtilityFunction.crra(0.5), UtilityFunction.crra(3.0), UtilityFunction.log()):
            ara = u.absolute_risk_aversion(ws)
            assert np.all(np.diff(ara) < 0.0)
        cara = UtilityFunction.cara(0.7).absolute_risk_aversion(ws)
        assert np.all(cara == 0.7)


class TestConcavityAndDerivativeConsistency:
    def test_signs_on_random_wealth(self):
        rng = np.random.default_rng(314)
        w = rng.uniform(0.05, 50.0, size=1000)
        for u in CONCAVE:
            assert np.all(u.marginal(w) > 0.0)
            assert np.all(u.second(w) < 0.0)

    def test_marginal_matches_numeric_derivative(self):
        rng = np.random.default_rng(2718)
        for u in CONCAVE:
            for w in rng.uniform(0.5, 20.0, size=40):
                numeric = central_diff(u.evaluate, w, 1e-5)
                assert u.marginal(w) == pytest.approx(numeric, rel=1e-6)

    def test_second_matches_numeric_derivative(self):
        rng = np.random.default_rng(161)
        for u in CONCAVE:
            for w in rng.uniform(0.5, 20.0, size=40):
                numeric = central_diff(u.marginal, w, 1e-5)
                assert u.second(w) == pytest.approx(numeric, rel=1e-6)

    def test_third_derivative_positive_for_crra_and_log(self):
        # prudence: u''' > 0 for the wealth-dependent families
        ws = np.linspace(0.5, 10.0, 50)
        for u in (UtilityFunction.crra(2.0), UtilityFunction.crra(0.5), UtilityFunction.log()):
            for w in ws:
                assert central_diff(u.second, float(w), 1e-5) > 0.0

    def test_ara_derivative_matches_numeric(self):
        for u in CONCAVE:
            for w in (0.7, 2.0, 9.0):
                numeric = central_diff(u.absolute_risk_aversion, w, 1e-5)
                assert u.ara_derivative(w) == pytest.approx(numeric, abs=1e-6)

    def test_relative_is_wealth_times_absolute(self):
        ws = np.linspace(0.3, 15.0, 25)
        for u in CONCAVE:
            assert np.allclose(
                u.relative_risk_aversion(ws), ws * u.absolute_risk_aversion(ws)
            )


class TestDomainGuards:
    @pytest.mark.parametrize(
        "u", [UtilityFunction.crra(2.0), UtilityFunction.crra(0.5), UtilityFunction.log()]
    )
    def test_nonpositive_wealth_rejected(self, u):
        for method in (u.evaluate, u.marginal, u.second, u.absolute_risk_aversion):
            with pytest.raises(DomainError) as excinfo:
                method(0.0)
            message = str(excinfo.value)
            assert u.label() in message and "0" in message

    def test_array_with_bad_entry_rejected(self):
        with pytest.raises(DomainError):
            UtilityFunction.log().evaluate(np.array([1.0, -2.0, 3.0]))

    def test_cara_accepts_any_wealth(self):
        u = UtilityFunction.cara(1.0)
        assert u.evaluate(-5.0) == pytest.approx(-np.exp(5.0))

    def test_bad_parameters_rejected(self):
        with pytest.raises(DomainError):
            UtilityFunction.cara(0.0)
        with pytest.raises(DomainError):
            UtilityFunction.crra(-1.0)
        with pytest.raises(DomainError):
            UtilityFunction.crra(1.0)

    def test_strict_concavity_flag(self):
        assert UtilityFunction.crra(2.0).strictly_concave
        assert not UtilityFunction.linear().strictly_concave
