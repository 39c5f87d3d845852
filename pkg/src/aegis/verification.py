"""Executable certificates for the model's comparative-statics claims.

Each checker evaluates one claim's premise and conclusion numerically on a
concrete scenario and reports CONSISTENT, VIOLATION, or PREMISE_NOT_MET.
The claims, in the order checked:

* T1 -- with strictly concave utility, full coverage, and positive mass on
  the non-insurable channel, the expected-utility derivative at full
  liability is strictly negative, so the optimal liability level stays
  below 1 (partial liability beats the traditional contract) at fair and
  loaded premiums alike.
* T2 -- stochastically enlarging the non-insurable loss (premium held
  fixed by construction) weakly lowers the optimal liability level.
* T3 -- stochastically enlarging the non-insurable loss weakly lowers the
  utility advantage of any fixed positive liability level over buying no
  cover at all.
* T4 -- in the reduced model, the demand slope d(theta*)/d(lambda') is
  nonnegative exactly when a single rho exists with

      int_L^w [A(W(x)) theta* (x - lambda' E(L)) - 1] dF(x)
          >= rho * int_L^w theta* (x - lambda' E(L)) dF(x)   for all L,

  checked as an interval-feasibility problem over an L-grid.
* P1 -- two sufficient conditions ((1-theta*) A'/A <= theta* along the
  wealth path, and a positive aggregated version of the T4 integrand)
  under which the T4 corridor is feasible.
* T5 -- the demand slope can only be nonnegative if relative risk aversion
  exceeds 1 somewhere on the realized wealth range; contrapositively,
  utilities with R <= 1 everywhere must have strictly negative slope at
  every interior optimum.

A VIOLATION on any scenario satisfying a premise is a defect in either the
claim or this implementation; the battery's pass condition is zero
violations.  All checkers are deterministic and side-effect free.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .contracts import AegisContract, IndemnityFunction, IndemnityKind
from .errors import DomainError
from .losses import (
    LossDistribution,
    MixedLossModel,
    ScaledBeta,
    TruncatedExponential,
    Uniform,
    fosd_shift,
)
from .numerics import QuadratureSpec, integrate
from .preferences import UtilityFunction
from .solver import (
    Boundary,
    Scenario,
    SensitivityScenario,
    SolveResult,
    dtheta_dlambda,
    eu_theta_derivative,
    expected_utility,
    optimal_theta,
    sensitivity_optimal_theta,
)

__all__ = [
    "TheoremId",
    "Verdict",
    "TheoremReport",
    "CorridorDecision",
    "rho_corridor_feasibility",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "check_theorem4",
    "check_proposition1",
    "check_theorem5",
    "BatteryConfig",
    "run_battery",
]


class TheoremId(str, Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    P1 = "P1"
    T5 = "T5"


class Verdict(str, Enum):
    CONSISTENT = "consistent"
    VIOLATION = "violation"
    PREMISE_NOT_MET = "premise_not_met"


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of one checker run on one scenario.

    The verdict encodes the premise/conclusion pair: VIOLATION if and only
    if the premise held and the conclusion failed.  ``witnesses`` carries
    the diagnostic numbers behind the decision.  Cells that crashed carry
    the message in ``error`` and assert nothing.
    """

    theorem_id: TheoremId
    scenario_digest: str
    premise_held: bool
    conclusion_held: bool
    witnesses: tuple[tuple[str, float], ...] = ()
    verdict: Verdict = Verdict.PREMISE_NOT_MET
    error: str | None = None


def _report(tid, digest, premise, conclusion, witnesses) -> TheoremReport:
    if not premise:
        verdict = Verdict.PREMISE_NOT_MET
        conclusion = False
    elif conclusion:
        verdict = Verdict.CONSISTENT
    else:
        verdict = Verdict.VIOLATION
    return TheoremReport(tid, digest, premise, conclusion, tuple(witnesses), verdict)


def _t1_premise(s: Scenario) -> bool:
    return (
        s.utility.strictly_concave
        and s.losses.non_security_prob > 0.0
        and s.contract.indemnity.kind is IndemnityKind.FULL
    )


def check_theorem1(
    s: Scenario,
    deriv_threshold: float = -1e-8,
    theta_gap: float = 1e-6,
    x_tol: float = 1e-10,
    spec: QuadratureSpec | None = None,
) -> TheoremReport:
    """Partial liability strictly preferred once non-insurable risk exists.

    Conclusion: d(EU)/d(theta) at theta=1 falls below ``deriv_threshold``
    and the optimum sits at or below ``1 - theta_gap`` -- at the scenario's
    own loading and again at a fair (zero) loading.
    """
    digest = f"T1|{s.label()}"
    if not _t1_premise(s):
        return _report(TheoremId.T1, digest, False, False, ())
    variants = [("", s)]
    if s.contract.loading != 0.0:
        fair = dataclasses.replace(
            s, contract=dataclasses.replace(s.contract, loading=0.0)
        )
        variants.append(("fair_", fair))
    witnesses = []
    conclusion = True
    for prefix, sv in variants:
        d1 = eu_theta_derivative(sv, 1.0, spec=spec)
        res = optimal_theta(sv, x_tol=x_tol, spec=spec)
        conclusion = conclusion and d1 < deriv_threshold and res.theta_star <= 1.0 - theta_gap
        witnesses.append((f"{prefix}deriv_at_theta1", d1))
        witnesses.append((f"{prefix}theta_star", res.theta_star))
    return _report(TheoremId.T1, digest, True, conclusion, witnesses)


def _check_t_grid(t_grid: Sequence[float]):
    grid = [float(t) for t in t_grid]
    if not grid:
        raise DomainError("t_grid must be non-empty")
    if any(t < 0.0 for t in grid):
        raise DomainError("t_grid entries must be >= 0")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("t_grid must be sorted ascending")
    return grid


def _shift_non_insurable(s: Scenario, t: float) -> Scenario:
    return dataclasses.replace(
        s, losses=dataclasses.replace(s.losses, f_ns=fosd_shift(s.losses.f_ns, t))
    )


def check_theorem2(
    s: Scenario,
    t_grid: Sequence[float],
    step_tol: float = 1e-5,
    x_tol: float = 1e-10,
    spec: QuadratureSpec | None = None,
) -> TheoremReport:
    """Demand falls as the non-insurable loss grows stochastically larger.

    Applies the CDF power shift to the non-insurable channel only, leaving
    the security density -- hence the premium -- untouched, and requires
    the optimal liability sequence to be nonincreasing within ``step_tol``
    and the recomputed premium to be bit-identical across the grid.
    """
    grid = _check_t_grid(t_grid)
    digest = f"T2|{s.label()}|t_grid={','.join(f'{t:g}' for t in grid)}"
    if not _t1_premise(s):
        return _report(TheoremId.T2, digest, False, False, ())
    thetas = []
    premiums = []
    witnesses = []
    for t in grid:
        st = _shift_non_insurable(s, t)
        res = optimal_theta(st, x_tol=x_tol, spec=spec)
        thetas.append(res.theta_star)
        premiums.append(st.premium)
        witnesses.append((f"theta_star_t={t:g}", res.theta_star))
    nonincreasing = all(b <= a + step_tol for a, b in zip(thetas, thetas[1:]))
    premium_constant = all(p == premiums[0] for p in premiums)
    witnesses.append(("premium_span", max(premiums) - min(premiums)))
    return _report(
        TheoremId.T2, digest, True, nonincreasing and premium_constant, witnesses
    )


def check_theorem3(
    s: Scenario,
    theta_fixed: float,
    t_grid: Sequence[float],
    rise_tol: float = 1e-8,
    spec: QuadratureSpec | None = None,
) -> TheoremReport:
    """Insurance loses relative appeal as non-insurable risk grows.

    Tracks Delta(t) = EU(theta_fixed) - EU(0) across the stochastic
    enlargement grid; the conclusion is that Delta never rises by more
    than ``rise_tol`` between consecutive grid points.
    """
    grid = _check_t_grid(t_grid)
    digest = (
        f"T3|{s.label()}|theta_fixed={theta_fixed:g}"
        f"|t_grid={','.join(f'{t:g}' for t in grid)}"
    )
    premise = s.utility.strictly_concave and 0.0 < theta_fixed <= 1.0
    if not premise:
        return _report(TheoremId.T3, digest, False, False, ())
    deltas = []
    witnesses = []
    for t in grid:
        st = _shift_non_insurable(s, t)
        delta = expected_utility(st, theta_fixed, spec=spec) - expected_utility(
            st, 0.0, spec=spec
        )
        deltas.append(delta)
        witnesses.append((f"delta_t={t:g}", delta))
    nonincreasing = all(b <= a + rise_tol for a, b in zip(deltas, deltas[1:]))
    return _report(TheoremId.T3, digest, True, nonincreasing, witnesses)


@dataclass(frozen=True)
class CorridorDecision:
    """Feasibility of a single rho with lhs_i >= rho * rhs_i for all rows.

    Rows with positive rhs cap rho from above, rows with negative rhs
    bound it from below, and rows with (numerically) zero rhs demand a
    nonnegative lhs outright.
    """

    feasible: bool
    rho_lower: float
    rho_upper: float
    zero_rows_ok: bool


def rho_corridor_feasibility(lhs, rhs) -> CorridorDecision:
    """Decide whether any single rho satisfies ``lhs >= rho * rhs`` rowwise."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lhs.shape != rhs.shape:
        raise DomainError("lhs and rhs must have matching shapes")
    rhs_tol = 1e-12 * max(1.0, float(np.max(np.abs(rhs))) if rhs.size else 0.0)
    lhs_tol = 1e-9 * max(1.0, float(np.max(np.abs(lhs))) if lhs.size else 0.0)
    pos = rhs > rhs_tol
    neg = rhs < -rhs_tol
    zero = ~pos & ~neg
    rho_upper = float(np.min(lhs[pos] / rhs[pos])) if np.any(pos) else np.inf
    rho_lower = float(np.max(lhs[neg] / rhs[neg])) if np.any(neg) else -np.inf
    zero_rows_ok = bool(np.all(lhs[zero] >= -lhs_tol)) if np.any(zero) else True
    feasible = rho_lower <= rho_upper and zero_rows_ok
    return CorridorDecision(feasible, rho_lower, rho_upper, zero_rows_ok)


def _corridor_rows(
    ss: SensitivityScenario, theta_star: float, n_grid: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tail integrals behind the T4 corridor, on an L-grid over [0, w].

    Row i holds (LHS(L_i), RHS(L_i)) with

        LHS(L) = int_L^w [A(W(x)) theta* (x - lambda' E(L)) - 1] dF(x),
        RHS(L) = int_L^w theta* (x - lambda' E(L)) dF(x),

    accumulated cellwise with Simpson's rule.  The support bound of F is
    inserted into the grid so no cell straddles the density's edge; rows
    beyond the support are exactly zero.
    """
    if n_grid < 2:
        raise DomainError(f"need an L-grid of >= 2 points, got {n_grid}")
    w = ss.w
    v = ss.total_loss.v
    pm = ss.lambda_prime * ss.insurable_mean
    grid = np.unique(np.concatenate([np.linspace(0.0, w, n_grid), [v]]))

    def densities(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pdf = np.asarray(ss.total_loss.pdf(x), dtype=float)
        mass = pdf > 0.0
        wealth = ss.wealth_at(x, theta_star)
        # Wealth beyond the loss support can leave the utility domain, but
        # those points carry no density; substitute a valid wealth there.
        safe_wealth = np.where(mass, wealth, ss.w - pm * theta_star)
        ara = np.asarray(ss.utility.absolute_risk_aversion(safe_wealth), dtype=float)
        weight = theta_star * (x - pm)
        lhs_density = np.where(mass, (ara * weight - 1.0) * pdf, 0.0)
        rhs_density = np.where(mass, weight * pdf, 0.0)
        return lhs_density, rhs_density

    support = grid[grid <= v]
    mids = 0.5 * (support[:-1] + support[1:])
    lhs_nodes, rhs_nodes = densities(support)
    lhs_mids, rhs_mids = densities(mids)
    dx = np.diff(support)
    lhs_cells = dx / 6.0 * (lhs_nodes[:-1] + 4.0 * lhs_mids + lhs_nodes[1:])
    rhs_cells = dx / 6.0 * (rhs_nodes[:-1] + 4.0 * rhs_mids + rhs_nodes[1:])

    lhs = np.zeros_like(grid)
    rhs = np.zeros_like(grid)
    k = support.size
    lhs[:k] = np.concatenate([np.cumsum(lhs_cells[::-1])[::-1], [0.0]])
    rhs[:k] = np.concatenate([np.cumsum(rhs_cells[::-1])[::-1], [0.0]])
    return grid, lhs, rhs


def _interior_base(
    ss: SensitivityScenario, x_tol: float, spec: QuadratureSpec | None
) -> SolveResult:
    return sensitivity_optimal_theta(ss, x_tol=x_tol, spec=spec)


def check_theorem4(
    ss: SensitivityScenario,
    l_grid_points: int = 401,
    h: float = 1e-3,
    x_tol: float = 1e-11,
    spec: QuadratureSpec | None = None,
) -> TheoremReport:
    """Demand-slope sign must match the rho-corridor's feasibility.

    Feasibility of a single rho through every L-row (computed from the
    tail integrals above) is the certificate for a nonnegative slope;
    infeasibility certifies a negative one.  Boundary optima carry no
    slope and fail the premise.
    """
    digest = f"T4|{ss.label()}|grid={l_grid_points}"
    base = _interior_base(ss, x_tol, spec)
    premise = ss.utility.strictly_concave and base.boundary is Boundary.INTERIOR
    if not premise:
        return _report(
            TheoremId.T4,
            digest,
            False,
            False,
            [("theta_star", base.theta_star)],
        )
    slope = dtheta_dlambda(ss, h=h, x_tol=x_tol, spec=spec, base=base)
    grid, lhs, rhs = _corridor_rows(ss, base.theta_star, l_grid_points)
    decision = rho_corridor_feasibility(lhs, rhs)
    conclusion = decision.feasible == (slope.value >= 0.0)
    witnesses = [
        ("theta_star", base.theta_star),
        ("slope", slope.value),
        ("slope_fd", slope.finite_difference),
        ("feasible", 1.0 if decision.feasible else 0.0),
        ("rho_lower", decision.rho_lower),
        ("rho_upper", decision.rho_upper),
        ("grid_rows", float(grid.size)),
    ]
    return _report(TheoremId.T4, digest, True, conclusion, witnesses)


def check_proposition1(
    ss: SensitivityScenario,
    l_grid_points: int = 401,
    x_tol: float = 1e-11,
    spec: QuadratureSpec | None = None,
) -> TheoremReport:
    """Sufficient conditions under which the T4 corridor is feasible.

    Premise (beyond an interior optimum under strictly concave utility):

    * along the wealth path, (1 - theta*) A'(W)/A(W) <= theta*, and
    * int_0^w A(W(L)) [L - lambda' E(L) - 1/(theta* A(W(L)))] dF(L) > 0.

    Conclusion: the single-rho corridor of the T4 check is feasible.
    """
    digest = f"P1|{ss.label()}|grid={l_grid_points}"
    base = _interior_base(ss, x_tol, spec)
    if not (ss.utility.strictly_concave and base.boundary is Boundary.INTERIOR):
        return _report(
            TheoremId.P1, digest, False, False, [("theta_star", base.theta_star)]
        )
    theta = base.theta_star
    pm = ss.lambda_prime * ss.insurable_mean
    xs = np.linspace(0.0, ss.total_loss.v, l_grid_points)
    wealth = ss.wealth_at(xs, theta)
    ara = np.asarray(ss.utility.absolute_risk_aversion(wealth), dtype=float)
    ara_d = np.asarray(ss.utility.ara_derivative(wealth), dtype=float)
    path_ratio = (1.0 - theta) * ara_d / ara
    cond_path = bool(np.all(path_ratio <= theta + 1e-12))

    aggregate = integrate(
        lambda x: (
            ss.utility.absolute_risk_aversion(ss.wealth_at(x, theta)) * (x - pm) - 1.0 / theta
        )
        * ss.total_loss.pdf(x),
        0.0,
        ss.total_loss.v,
        spec=spec,
    )
    cond_aggregate = aggregate > 0.0

    premise = cond_path and cond_aggregate
    _, lhs, rhs = _corridor_rows(ss, theta, l_grid_points)
    decision = rho_corridor_feasibility(lhs, rhs)
    witnesses = [
        ("theta_star", theta),
        ("path_ratio_max", float(np.max(path_ratio))),
        ("aggregate_integral", aggregate),
        ("feasible", 1.0 if decision.feasible else 0.0),
        ("rho_lower", decision.rho_lower),
        ("rho_upper", decision.rho_upper),
    ]
    return _report(TheoremId.P1, digest, premise, decision.feasible, witnesses)


def check_theorem5(
    ss_family: Sequence[SensitivityScenario],
    lambda_grid: Sequence[float],
    h: float = 1e-3,
    x_tol: float = 1e-11,
    spec: QuadratureSpec | None = None,
) -> TheoremReport:
    """Low relative risk aversion forces demand to fall with the premium.

    Contrapositive direction only: when R(W) <= 1 on the whole realized
    wealth interval of every interior grid cell, every interior slope must
    be strictly negative.  Utilities whose R exceeds 1 somewhere do not
    meet the premise; their observed slopes are still recorded as
    witnesses (no converse is asserted).
    """
    if not ss_family:
        raise DomainError("ss_family must be non-empty")
    utility = ss_family[0].utility
    if any(ss.utility != utility for ss in ss_family):
        raise DomainError("all scenarios in a family must share one utility")
    grid = [float(lp) for lp in lambda_grid]
    if not grid:
        raise DomainError("lambda_grid must be non-empty")
    digest = (
        f"T5|u={utility.label()}|family_size={len(ss_family)}"
        f"|lp=[{grid[0]:g}..{grid[-1]:g}]x{len(grid)}"
    )

    slopes: list[float] = []
    fd_gaps: list[float] = []
    sup_rra = -np.inf
    n_boundary = 0
    noise = x_tol / h
    for ss in ss_family:
        for lp in grid:
            cell = dataclasses.replace(ss, lambda_prime=lp)
            base = sensitivity_optimal_theta(cell, x_tol=x_tol, spec=spec)
            if base.boundary is not Boundary.INTERIOR:
                n_boundary += 1
                continue
            # R(W) is monotone in wealth for every supported family, so the
            # interval supremum is attained at a wealth endpoint.
            w_low = cell.wealth_at(cell.total_loss.v, base.theta_star)
            w_high = cell.wealth_at(0.0, base.theta_star)
            sup_rra = max(
                sup_rra,
                float(utility.relative_risk_aversion(w_low)),
                float(utility.relative_risk_aversion(w_high)),
            )
            slope = dtheta_dlambda(cell, h=h, x_tol=x_tol, spec=spec, base=base)
            slopes.append(slope.value)
            fd_gaps.append(abs(slope.value - slope.finite_difference))

    witnesses = [
        ("n_interior", float(len(slopes))),
        ("n_boundary", float(n_boundary)),
        ("sup_rra", sup_rra),
        ("noise_floor", noise),
    ]
    if slopes:
        witnesses += [
            ("max_slope", max(slopes)),
            ("min_abs_slope", min(abs(s) for s in slopes)),
            ("max_oracle_gap", max(fd_gaps)),
        ]
    premise = utility.strictly_concave and bool(slopes) and sup_rra <= 1.0
    conclusion = all(s < 0.0 for s in slopes)
    return _report(TheoremId.T5, digest, premise, conclusion, witnesses)


@dataclass(frozen=True)
class BatteryConfig:
    """Scenario grids and thresholds for a full verification battery.

    The full-model cells are the cartesian product utilities x security
    densities x non-security densities x (alpha, beta) pairs x loadings;
    the reduced-model cells are utilities x loss densities x gross
    loadings.  Checker thresholds are exposed so failure paths can be
    exercised deliberately.
    """

    theorems: tuple[TheoremId, ...] = tuple(TheoremId)
    utilities: tuple[UtilityFunction, ...] = ()
    f_s_menu: tuple[LossDistribution, ...] = ()
    f_ns_menu: tuple[LossDistribution, ...] = ()
    alpha_beta: tuple[tuple[float, float], ...] = ()
    loadings: tuple[float, ...] = ()
    w0: float = 2.0
    v: float = 1.0
    t_grid: tuple[float, ...] = (0.0, 0.25, 0.5, 1.0, 2.0)
    theta_fixed: tuple[float, ...] = (0.25, 0.5, 1.0)
    sens_utilities: tuple[UtilityFunction, ...] = ()
    sens_losses: tuple[LossDistribution, ...] = ()
    sens_lambda_primes: tuple[float, ...] = ()
    sens_w: float = 1.25
    t5_utilities: tuple[UtilityFunction, ...] = ()
    t5_losses: tuple[LossDistribution, ...] = ()
    t5_lambda_grid: tuple[float, ...] = ()
    l_grid_points: int = 401
    t1_deriv_threshold: float = -1e-8
    t1_theta_gap: float = 1e-6
    t2_step_tol: float = 1e-5
    t3_rise_tol: float = 1e-8

    @classmethod
    def default(cls) -> "BatteryConfig":
        v = 1.0
        utilities = (
            UtilityFunction.cara(0.5),
            UtilityFunction.cara(1.0),
            UtilityFunction.crra(0.5),
            UtilityFunction.crra(2.0),
            UtilityFunction.crra(3.0),
            UtilityFunction.log(),
        )
        menu = (Uniform(v), TruncatedExponential(1.0, v), ScaledBeta(2.0, 5.0, v))
        return cls(
            utilities=utilities,
            f_s_menu=menu,
            f_ns_menu=menu,
            alpha_beta=((0.4, 0.2), (0.3, 0.3)),
            loadings=(0.0, 0.2),
            w0=2.0,
            v=v,
            sens_utilities=utilities,
            sens_losses=menu,
            sens_lambda_primes=(1.02, 1.05, 1.1, 1.2),
            sens_w=1.25,
            t5_utilities=(
                UtilityFunction.log(),
                UtilityFunction.crra(0.5),
                UtilityFunction.crra(2.0),
            ),
            t5_losses=(Uniform(v),),
            t5_lambda_grid=tuple(np.geomspace(1.01, 1.5, 20)),
        )

    def full_model_scenarios(self) -> list[Scenario]:
        cells = []
        for u, f_s, f_ns, (alpha, beta), loading in itertools.product(
            self.utilities, self.f_s_menu, self.f_ns_menu, self.alpha_beta, self.loadings
        ):
            cells.append(
                Scenario(
                    w0=self.w0,
                    v=self.v,
                    losses=MixedLossModel(alpha, beta, f_s, f_ns),
                    utility=u,
                    contract=AegisContract(1.0, loading, IndemnityFunction.full()),
                )
            )
        return cells

    def sensitivity_scenarios(self) -> list[SensitivityScenario]:
        cells = []
        for u, dist, lp in itertools.product(
            self.sens_utilities, self.sens_losses, self.sens_lambda_primes
        ):
            cells.append(
                SensitivityScenario(
                    w=self.sens_w, total_loss=dist, lambda_prime=lp, utility=u
                )
            )
        return cells

    def t5_families(self) -> list[list[SensitivityScenario]]:
        families = []
        for u in self.t5_utilities:
            family = [
                SensitivityScenario(
                    w=self.sens_w,
                    total_loss=dist,
                    lambda_prime=self.t5_lambda_grid[0] if self.t5_lambda_grid else 1.0,
                    utility=u,
                )
                for dist in self.t5_losses
            ]
            if family:
                families.append(family)
        return families


def _errored(tid: TheoremId, digest: str, exc: Exception) -> TheoremReport:
    return TheoremReport(
        tid, digest, False, False, (), Verdict.PREMISE_NOT_MET, error=str(exc)
    )


def run_battery(config: BatteryConfig) -> list[TheoremReport]:
    """Run every configured checker over its scenario grid.

    Reports come back in a deterministic order (theorem by theorem, cells
    in cartesian-product order).  A crash inside one cell is recorded on
    that cell's report and the battery continues; the suite-pass condition
    is that no report carries a VIOLATION verdict.
    """
    reports: list[TheoremReport] = []
    wants = set(config.theorems)

    full_cells = (
        config.full_model_scenarios()
        if wants & {TheoremId.T1, TheoremId.T2, TheoremId.T3}
        else []
    )
    sens_cells = (
        config.sensitivity_scenarios()
        if wants & {TheoremId.T4, TheoremId.P1}
        else []
    )

    if TheoremId.T1 in wants:
        for s in full_cells:
            try:
                reports.append(
                    check_theorem1(
                        s,
                        deriv_threshold=config.t1_deriv_threshold,
                        theta_gap=config.t1_theta_gap,
                    )
                )
            except Exception as exc:
                reports.append(_errored(TheoremId.T1, f"T1|{s.label()}", exc))

    if TheoremId.T2 in wants:
        for s in full_cells:
            try:
                reports.append(
                    check_theorem2(s, config.t_grid, step_tol=config.t2_step_tol)
                )
            except Exception as exc:
                reports.append(_errored(TheoremId.T2, f"T2|{s.label()}", exc))

    if TheoremId.T3 in wants:
        for s in full_cells:
            for theta_fixed in config.theta_fixed:
                try:
                    reports.append(
                        check_theorem3(
                            s, theta_fixed, config.t_grid, rise_tol=config.t3_rise_tol
                        )
                    )
                except Exception as exc:
                    reports.append(
                        _errored(
                            TheoremId.T3,
                            f"T3|{s.label()}|theta_fixed={theta_fixed:g}",
                            exc,
                        )
                    )

    if TheoremId.T4 in wants:
        for ss in sens_cells:
            try:
                reports.append(check_theorem4(ss, l_grid_points=config.l_grid_points))
            except Exception as exc:
                reports.append(_errored(TheoremId.T4, f"T4|{ss.label()}", exc))

    if TheoremId.P1 in wants:
        for ss in sens_cells:
            try:
                reports.append(
                    check_proposition1(ss, l_grid_points=config.l_grid_points)
                )
            except Exception as exc:
                reports.append(_errored(TheoremId.P1, f"P1|{ss.label()}", exc))

    if TheoremId.T5 in wants:
        for family in config.t5_families():
            digest = f"T5|u={family[0].utility.label()}"
            try:
                reports.append(check_theorem5(family, config.t5_lambda_grid))
            except Exception as exc:
                reports.append(_errored(TheoremId.T5, digest, exc))

    return reports
