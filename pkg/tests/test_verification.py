import dataclasses

import numpy as np
import pytest

from aegis.contracts import AegisContract, IndemnityFunction
from aegis.errors import DomainError
from aegis.losses import MixedLossModel, ScaledBeta, TruncatedExponential, Uniform
from aegis.preferences import UtilityFunction
from aegis.solver import Boundary, Scenario, SensitivityScenario, optimal_theta
from aegis.verification import (
    BatteryConfig,
    TheoremId,
    Verdict,
    check_proposition1,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    check_theorem4,
    check_theorem5,
    rho_corridor_feasibility,
    run_battery,
)
from aegis.verification import _corridor_rows

FULL = IndemnityFunction.full()


def reference_scenario(utility=None, alpha=0.4, beta=0.2, loading=0.0, indemnity=FULL):
    return Scenario(
        w0=2.0,
        v=1.0,
        losses=MixedLossModel(alpha, beta, Uniform(1.0), Uniform(1.0)),
        utility=utility or UtilityFunction.crra(2.0),
        contract=AegisContract(1.0, loading, indemnity),
    )


def sens_scenario(utility, lp=1.05, dist=None, w=1.25):
    return SensitivityScenario(
        w=w, total_loss=dist or Uniform(1.0), lambda_prime=lp, utility=utility
    )


class TestTheorem1:
    def test_reference_scenario_consistent(self):
        report = check_theorem1(reference_scenario())
        assert report.verdict is Verdict.CONSISTENT
        witnesses = dict(report.witnesses)
        assert witnesses["deriv_at_theta1"] < 0.0
        assert witnesses["theta_star"] < 1.0 - 1e-6

    def test_loaded_scenario_checks_fair_variant_too(self):
        report = check_theorem1(reference_scenario(loading=0.2))
        witnesses = dict(report.witnesses)
        assert report.verdict is Verdict.CONSISTENT
        assert "fair_deriv_at_theta1" in witnesses
        assert witnesses["fair_deriv_at_theta1"] < 0.0

    def test_risk_neutral_premise_not_met(self):
        report = check_theorem1(reference_scenario(utility=UtilityFunction.linear()))
        assert report.verdict is Verdict.PREMISE_NOT_MET

    def test_deductible_contract_premise_not_met(self):
        report = check_theorem1(
            reference_scenario(indemnity=IndemnityFunction.with_deductible(0.3))
        )
        assert report.verdict is Verdict.PREMISE_NOT_MET

    def test_no_uninsurable_risk_premise_not_met_and_full_insurance(self):
        s = reference_scenario(alpha=0.4, beta=0.6)
        report = check_theorem1(s)
        assert report.verdict is Verdict.PREMISE_NOT_MET
        assert optimal_theta(s).theta_star == 1.0

    def test_corrupted_threshold_forces_violation(self):
        report = check_theorem1(reference_scenario(), deriv_threshold=-10.0)
        assert report.verdict is Verdict.VIOLATION


class TestTheorem2:
    def test_reference_sweep_consistent(self):
        report = check_theorem2(reference_scenario(), (0.0, 0.5, 1.0, 2.0))
        assert report.verdict is Verdict.CONSISTENT
        witnesses = dict(report.witnesses)
        thetas = [witnesses[f"theta_star_t={t:g}"] for t in (0.0, 0.5, 1.0, 2.0)]
        assert all(b <= a for a, b in zip(thetas, thetas[1:]))
        assert witnesses["premium_span"] == 0.0

    def test_single_point_grid_trivially_consistent(self):
        report = check_theorem2(reference_scenario(), (0.0,))
        assert report.verdict is Verdict.CONSISTENT

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            check_theorem2(reference_scenario(), (1.0, 0.5))
        with pytest.raises(DomainError):
            check_theorem2(reference_scenario(), (-0.5, 1.0))
        with pytest.raises(DomainError):
            check_theorem2(reference_scenario(), ())

    def test_risk_neutral_premise_not_met(self):
        report = check_theorem2(
            reference_scenario(utility=UtilityFunction.linear()), (0.0, 1.0)
        )
        assert report.verdict is Verdict.PREMISE_NOT_MET


class TestTheorem3:
    def test_reference_sweep_consistent(self):
        report = check_theorem3(reference_scenario(), 0.5, (0.0, 1.0, 2.0))
        assert report.verdict is Verdict.CONSISTENT
        witnesses = dict(report.witnesses)
        deltas = [witnesses[f"delta_t={t:g}"] for t in (0.0, 1.0, 2.0)]
        assert all(b <= a for a, b in zip(deltas, deltas[1:]))

    def test_all_mass_on_no_loss_gives_constant_gap(self):
        s = reference_scenario(alpha=0.0, beta=1.0)
        report = check_theorem3(s, 0.5, (0.0, 1.0, 2.0))
        assert report.verdict is Verdict.CONSISTENT
        deltas = [value for name, value in report.witnesses if name.startswith("delta")]
        assert max(deltas) - min(deltas) < 1e-12

    def test_risk_neutral_fair_gap_is_zero(self):
        # not a checker verdict (risk aversion premise fails): the flatness
        # itself is asserted directly
        s = reference_scenario(utility=UtilityFunction.linear())
        from aegis.solver import expected_utility

        for t in (0.0, 1.0):
            from aegis.verification import _shift_non_insurable

            st = _shift_non_insurable(s, t)
            delta = expected_utility(st, 0.5) - expected_utility(st, 0.0)
            assert abs(delta) < 1e-9
        report = check_theorem3(s, 0.5, (0.0, 1.0))
        assert report.verdict is Verdict.PREMISE_NOT_MET

    def test_zero_theta_fixed_premise_not_met(self):
        report = check_theorem3(reference_scenario(), 0.0, (0.0, 1.0))
        assert report.verdict is Verdict.PREMISE_NOT_MET


class TestRhoCorridor:
    def test_all_positive_rows_feasible(self):
        lhs = np.array([3.0, 2.0, 5.0])
        rhs = np.array([1.0, 1.0, 2.0])
        decision = rho_corridor_feasibility(lhs, rhs)
        assert decision.feasible
        assert decision.rho_upper == pytest.approx(2.0)  # min of the ratios
        assert decision.rho_lower == -np.inf

    def test_empty_interval_infeasible(self):
        # positive row caps rho at 1, negative row demands rho >= 2
        lhs = np.array([1.0, -2.0])
        rhs = np.array([1.0, -1.0])
        decision = rho_corridor_feasibility(lhs, rhs)
        assert not decision.feasible
        assert decision.rho_lower > decision.rho_upper

    def test_zero_rows_require_nonnegative_lhs(self):
        ok = rho_corridor_feasibility(np.array([0.5, 1.0]), np.array([0.0, 1.0]))
        assert ok.feasible and ok.zero_rows_ok
        bad = rho_corridor_feasibility(np.array([-0.5, 1.0]), np.array([0.0, 1.0]))
        assert not bad.feasible and not bad.zero_rows_ok

    def test_two_sided_corridor(self):
        # rho must lie in [1, 3]: feasible
        lhs = np.array([3.0, -1.0])
        rhs = np.array([1.0, -1.0])
        decision = rho_corridor_feasibility(lhs, rhs)
        assert decision.feasible
        assert decision.rho_lower == pytest.approx(1.0)
        assert decision.rho_upper == pytest.approx(3.0)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DomainError):
            rho_corridor_feasibility(np.zeros(3), np.zeros(4))


class TestTheorem4:
    def test_negative_slope_consistent(self):
        report = check_theorem4(sens_scenario(UtilityFunction.crra(0.5), lp=1.05))
        assert report.verdict is Verdict.CONSISTENT
        witnesses = dict(report.witnesses)
        assert witnesses["slope"] < 0.0
        assert witnesses["feasible"] == 0.0

    def test_slope_oracles_agree(self):
        report = check_theorem4(sens_scenario(UtilityFunction.crra(2.0), lp=1.1))
        witnesses = dict(report.witnesses)
        assert witnesses["slope"] == pytest.approx(witnesses["slope_fd"], abs=1e-3)

    def test_boundary_premise_not_met(self):
        report = check_theorem4(sens_scenario(UtilityFunction.crra(2.0), lp=1.0))
        assert report.verdict is Verdict.PREMISE_NOT_MET

    def test_decision_stable_under_grid_refinement(self):
        for utility in (UtilityFunction.crra(0.5), UtilityFunction.log(), UtilityFunction.cara(1.0)):
            ss = sens_scenario(utility, lp=1.05)
            verdicts = {
                n: check_theorem4(ss, l_grid_points=n).verdict for n in (201, 401, 801)
            }
            assert len(set(verdicts.values())) == 1

    def test_corridor_rows_zero_beyond_support(self):
        from aegis.solver import sensitivity_optimal_theta

        ss = sens_scenario(UtilityFunction.crra(2.0), lp=1.05)
        base = sensitivity_optimal_theta(ss)
        grid, lhs, rhs = _corridor_rows(ss, base.theta_star, 201)
        beyond = grid > ss.total_loss.v
        assert np.any(beyond)
        assert np.all(lhs[beyond] == 0.0) and np.all(rhs[beyond] == 0.0)


class TestProposition1:
    def test_cara_path_condition_trivial(self):
        report = check_proposition1(sens_scenario(UtilityFunction.cara(1.0), lp=1.05))
        witnesses = dict(report.witnesses)
        assert witnesses["path_ratio_max"] == 0.0  # A' vanishes for CARA
        assert report.verdict in (Verdict.CONSISTENT, Verdict.PREMISE_NOT_MET)

    def test_crra_path_condition_negative(self):
        report = check_proposition1(sens_scenario(UtilityFunction.crra(3.0), lp=1.05))
        witnesses = dict(report.witnesses)
        assert witnesses["path_ratio_max"] <= 0.0  # A' < 0 for the DARA families
        assert "aggregate_integral" in witnesses

    def test_boundary_premise_not_met(self):
        report = check_proposition1(sens_scenario(UtilityFunction.crra(2.0), lp=1.0))
        assert report.verdict is Verdict.PREMISE_NOT_MET

    def test_never_violates_on_battery_pool(self):
        config = BatteryConfig.default()
        for ss in config.sensitivity_scenarios()[:12]:
            report = check_proposition1(ss)
            assert report.verdict is not Verdict.VIOLATION


class TestTheorem5:
    grid = tuple(np.geomspace(1.01, 1.5, 20))

    def test_log_family_all_negative(self):
        report = check_theorem5([sens_scenario(UtilityFunction.log())], self.grid)
        assert report.verdict is Verdict.CONSISTENT
        witnesses = dict(report.witnesses)
        assert witnesses["sup_rra"] == 1.0
        assert witnesses["n_interior"] >= 5
        assert witnesses["max_slope"] < 0.0

    def test_low_crra_family_all_negative(self):
        report = check_theorem5([sens_scenario(UtilityFunction.crra(0.5))], self.grid)
        assert report.verdict is Verdict.CONSISTENT
        assert dict(report.witnesses)["max_slope"] < 0.0

    def test_high_crra_premise_not_met_with_witnesses(self):
        report = check_theorem5([sens_scenario(UtilityFunction.crra(2.0))], self.grid)
        assert report.verdict is Verdict.PREMISE_NOT_MET
        witnesses = dict(report.witnesses)
        assert witnesses["sup_rra"] > 1.0
        assert "max_slope" in witnesses  # observed signs still recorded

    def test_all_boundary_grid_premise_not_met(self):
        # every point beyond the demand cutoff solves to the lower boundary
        report = check_theorem5(
            [sens_scenario(UtilityFunction.crra(0.5))], (1.4, 1.45, 1.5)
        )
        assert report.verdict is Verdict.PREMISE_NOT_MET
        assert dict(report.witnesses)["n_interior"] == 0.0

    def test_mixed_utilities_rejected(self):
        with pytest.raises(DomainError):
            check_theorem5(
                [
                    sens_scenario(UtilityFunction.log()),
                    sens_scenario(UtilityFunction.crra(0.5)),
                ],
                self.grid,
            )


class TestRunBattery:
    def small_config(self, **overrides):
        base = BatteryConfig.default()
        params = dict(
            utilities=(UtilityFunction.crra(2.0), UtilityFunction.log()),
            f_s_menu=(Uniform(1.0),),
            f_ns_menu=(Uniform(1.0), TruncatedExponential(1.0, 1.0)),
            alpha_beta=((0.4, 0.2),),
            loadings=(0.0, 0.2),
            sens_utilities=(UtilityFunction.crra(0.5),),
            sens_losses=(Uniform(1.0),),
            sens_lambda_primes=(1.05,),
            t5_utilities=(UtilityFunction.log(),),
            t5_lambda_grid=tuple(np.geomspace(1.01, 1.2, 4)),
            t_grid=(0.0, 1.0),
            theta_fixed=(0.5,),
        )
        params.update(overrides)
        return dataclasses.replace(base, **params)

    def test_empty_config_empty_list(self):
        assert run_battery(dataclasses.replace(BatteryConfig.default(), theorems=())) == []

    def test_small_battery_no_violations(self):
        reports = run_battery(self.small_config())
        assert reports
        assert all(r.verdict is not Verdict.VIOLATION for r in reports)
        assert all(r.error is None for r in reports)
        by_id = {tid: [r for r in reports if r.theorem_id is tid] for tid in TheoremId}
        assert len(by_id[TheoremId.T1]) == 8
        assert len(by_id[TheoremId.T2]) == 8
        assert len(by_id[TheoremId.T3]) == 8
        assert len(by_id[TheoremId.T4]) == 1
        assert len(by_id[TheoremId.P1]) == 1
        assert len(by_id[TheoremId.T5]) == 1

    def test_linear_rows_premise_not_met_never_violation(self):
        config = self.small_config(
            utilities=(UtilityFunction.linear(),),
            sens_utilities=(UtilityFunction.linear(),),
            t5_utilities=(UtilityFunction.linear(),),
        )
        reports = run_battery(config)
        assert reports
        assert all(r.verdict is Verdict.PREMISE_NOT_MET for r in reports)

    def test_reports_deterministic(self):
        config = self.small_config(theorems=(TheoremId.T1, TheoremId.T4))
        assert run_battery(config) == run_battery(config)

    def test_corrupted_threshold_produces_violations(self):
        config = self.small_config(
            theorems=(TheoremId.T1,), t1_deriv_threshold=-10.0
        )
        reports = run_battery(config)
        assert any(r.verdict is Verdict.VIOLATION for r in reports)

    def test_theorem_subset_respected(self):
        config = self.small_config(theorems=(TheoremId.T5,))
        reports = run_battery(config)
        assert reports and all(r.theorem_id is TheoremId.T5 for r in reports)
