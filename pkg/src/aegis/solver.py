"""Expected utility of final wealth, the optimal liability level, and demand.

Two wealth models live here.  The full model splits losses into the two
exclusive channels: final wealth is

    W = w0 + v - L_s - L_ns + theta * (I(L_s) - P),

and its expected utility decomposes into a security-loss integral, a
non-security-loss integral, and a no-loss atom.  The reduced sensitivity
model prices a single total loss L ~ F against a gross loading
``lambda' = 1 + lambda``:

    W = w - L + theta * (L - lambda' * E(L)),

which is the convenient form for studying how the optimal liability level
``theta*`` responds to premium changes.

For strictly concave utility both objectives are concave in theta (their
second theta-derivative is an expectation of u'' times a square), so the
optimum is found by classifying the first-order condition's sign at the
endpoints and root-finding it in between.
"""

from __future__ import annotations

import dataclasses
import functools
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .contracts import AegisContract, premium
from .errors import DomainError
from .losses import LossDistribution, MixedLossModel
from .numerics import QuadratureSpec, integrate
from .preferences import UtilityFamily, UtilityFunction

__all__ = [
    "Boundary",
    "SolveResult",
    "Scenario",
    "SensitivityScenario",
    "final_wealth",
    "expected_utility",
    "eu_theta_derivative",
    "optimal_theta",
    "sensitivity_expected_utility",
    "sensitivity_foc",
    "sensitivity_optimal_theta",
    "ThetaSensitivity",
    "dtheta_dlambda",
    "DemandPoint",
    "demand_curve",
]

_DEFAULT_X_TOL = 1e-10


class Boundary(str, Enum):
    INTERIOR = "interior"
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a liability-level optimization.

    ``foc_at_star`` is the first-order condition evaluated at the reported
    optimum: near zero at an interior optimum, <= 0 at the lower boundary,
    >= 0 at the upper boundary (up to quadrature noise).
    """

    theta_star: float
    eu_at_star: float
    foc_at_star: float
    boundary: Boundary


@dataclass(frozen=True)
class Scenario:
    """Wealth split, mixed loss model, utility, and contract family.

    ``w0`` is the wealth component not at risk; ``v`` is the value exposed
    to loss (both loss channels are supported on [0, v]).  For utilities
    that require positive wealth the construction enforces the
    conservative guard ``w0 - P > 0``, which bounds final wealth away from
    zero at every theta in [0, 1] and every admissible loss.
    """

    w0: float
    v: float
    losses: MixedLossModel
    utility: UtilityFunction
    contract: AegisContract

    def __post_init__(self):
        if not self.v > 0.0:
            raise DomainError(f"v must be > 0, got {self.v}")
        if self.losses.v != self.v:
            raise DomainError(
                f"loss support {self.losses.v} does not match scenario v={self.v}"
            )
        if self.utility.family in (UtilityFamily.CRRA, UtilityFamily.LOG):
            if not self.w0 - self.premium > 0.0:
                raise DomainError(
                    f"{self.utility.label()} needs w0 - premium > 0 to keep final "
                    f"wealth positive, got w0={self.w0:g}, premium={self.premium:g}"
                )

    @functools.cached_property
    def premium(self) -> float:
        """Full-liability premium for this scenario's contract."""
        return premium(self.losses, self.contract)

    def label(self) -> str:
        return (
            f"u={self.utility.label()}|{self.losses.label()}"
            f"|{self.contract.label()}|w0={self.w0:g}|v={self.v:g}"
        )


def final_wealth(s: Scenario, l_s, l_ns, theta: float):
    """Realized final wealth for given losses and liability level.

    Losses are mutually exclusive; passing a pair with both entries
    positive is a domain error.  Accepts arrays for Monte Carlo use.
    """
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    l_s_arr = np.asarray(l_s, dtype=float)
    l_ns_arr = np.asarray(l_ns, dtype=float)
    if np.any(l_s_arr * l_ns_arr != 0.0):
        raise DomainError("losses are mutually exclusive: l_s * l_ns must be 0")
    cover = s.contract.indemnity(l_s_arr if l_s_arr.ndim else float(l_s_arr))
    out = s.w0 + s.v - l_s_arr - l_ns_arr + theta * (np.asarray(cover) - s.premium)
    return out if out.ndim else float(out)


def expected_utility(
    s: Scenario, theta: float, spec: QuadratureSpec | None = None
) -> float:
    """Expected utility of final wealth at liability level ``theta``.

    Sum of the three channel contributions:

    * security loss:     alpha * E[u(w0 + v - x + theta (I(x) - P))] under f_s,
    * non-security loss: (1 - alpha - beta) * E[u(w0 + v - y - theta P)] under f_ns,
    * no loss:           beta * u(w0 + v - theta P).

    The indemnity kink is passed to the quadrature as a split point.
    """
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    m = s.losses
    u = s.utility
    p = s.premium
    base = s.w0 + s.v
    total = 0.0
    if m.alpha > 0.0:
        total += m.alpha * integrate(
            lambda x: u.evaluate(base - x + theta * (s.contract.indemnity(x) - p))
            * m.f_s.pdf(x),
            0.0,
            s.v,
            spec=spec,
            split_points=s.contract.indemnity.breakpoints,
        )
    if m.non_security_prob > 0.0:
        total += m.non_security_prob * integrate(
            lambda y: u.evaluate(base - y - theta * p) * m.f_ns.pdf(y),
            0.0,
            s.v,
            spec=spec,
        )
    if m.beta > 0.0:
        total += m.beta * float(u.evaluate(base - theta * p))
    return total


def eu_theta_derivative(
    s: Scenario, theta: float, spec: QuadratureSpec | None = None
) -> float:
    """Exact theta-derivative of :func:`expected_utility`.

    Differentiating under the integral signs gives

        alpha * E[u'(.) (I(x) - P)]  -  P (1-alpha-beta) E[u'(.)]
                                     -  beta P u'(w0 + v - theta P),

    with the same wealth arguments as the expected utility itself.
    """
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    m = s.losses
    u = s.utility
    p = s.premium
    base = s.w0 + s.v
    total = 0.0
    if m.alpha > 0.0:
        total += m.alpha * integrate(
            lambda x: u.marginal(base - x + theta * (s.contract.indemnity(x) - p))
            * (np.asarray(s.contract.indemnity(x), dtype=float) - p)
            * m.f_s.pdf(x),
            0.0,
            s.v,
            spec=spec,
            split_points=s.contract.indemnity.breakpoints,
        )
    if m.non_security_prob > 0.0:
        total += -p * m.non_security_prob * integrate(
            lambda y: u.marginal(base - y - theta * p) * m.f_ns.pdf(y),
            0.0,
            s.v,
            spec=spec,
        )
    if m.beta > 0.0:
        total += -p * m.beta * float(u.marginal(base - theta * p))
    return total


def _solve_concave(foc, objective, x_tol: float) -> SolveResult:
    """Maximize a concave objective on [0, 1] given its derivative.

    The derivative is nonincreasing, so the sign pattern at the endpoints
    classifies the optimum; a sign change is bracketed and root-found.
    Endpoint comparisons use a small scale-relative band so that exact
    boundary optima (where the true derivative vanishes at the endpoint)
    are not pushed into a spurious interior search by quadrature noise.
    """
    d0 = foc(0.0)
    d1 = foc(1.0)
    endpoint_tol = 1e-5 * max(abs(d0), abs(d1)) + 1e-8
    if d0 <= endpoint_tol:
        return SolveResult(0.0, objective(0.0), d0, Boundary.LOWER)
    if d1 >= -endpoint_tol:
        return SolveResult(1.0, objective(1.0), d1, Boundary.UPPER)
    theta = float(brentq(foc, 0.0, 1.0, xtol=x_tol, rtol=8.9e-16))
    return SolveResult(theta, objective(theta), foc(theta), Boundary.INTERIOR)


def optimal_theta(
    s: Scenario,
    x_tol: float = _DEFAULT_X_TOL,
    spec: QuadratureSpec | None = None,
) -> SolveResult:
    """Liability level maximizing expected utility over [0, 1].

    Strict concavity of the utility makes the objective concave in theta,
    so the unique optimum is either an endpoint (detected from the
    first-order condition's sign there) or the root of the first-order
    condition.
    """
    return _solve_concave(
        lambda t: eu_theta_derivative(s, t, spec=spec),
        lambda t: expected_utility(s, t, spec=spec),
        x_tol,
    )


@dataclass(frozen=True)
class SensitivityScenario:
    """Reduced single-loss wealth model used for demand sensitivity.

    ``w`` is total initial wealth, ``total_loss`` the distribution F of
    the (single) loss on [0, v], and ``lambda_prime >= 1`` the gross
    loading.  ``insurable_mean`` is E(L) as the insurer prices it; by
    default the mean of ``total_loss`` itself, but it can be set lower to
    express a pricing rule that only loads the security share of the loss.
    """

    w: float
    total_loss: LossDistribution
    lambda_prime: float
    utility: UtilityFunction
    insurable_mean: float | None = None

    def __post_init__(self):
        if self.lambda_prime < 1.0:
            raise DomainError(
                f"gross loading must be >= 1, got {self.lambda_prime}"
            )
        if self.insurable_mean is None:
            object.__setattr__(self, "insurable_mean", float(self.total_loss.mean()))
        if self.insurable_mean <= 0.0:
            raise DomainError(
                f"insurable mean must be > 0, got {self.insurable_mean}"
            )
        if self.total_loss.v > self.w:
            raise DomainError(
                f"loss support [0, {self.total_loss.v}] exceeds wealth w={self.w}"
            )
        if self.utility.family in (UtilityFamily.CRRA, UtilityFamily.LOG):
            floor = min(
                self.w - self.total_loss.v,
                self.w - self.lambda_prime * self.insurable_mean,
            )
            if not floor > 0.0:
                raise DomainError(
                    f"{self.utility.label()} needs positive wealth at every theta; "
                    f"worst case is {floor:g}"
                )

    def wealth_at(self, loss, theta: float):
        """Realized wealth w - L + theta (L - lambda' E(L)) at loss = ``loss``."""
        return (
            self.w
            - np.asarray(loss, dtype=float)
            + theta * (np.asarray(loss, dtype=float) - self.lambda_prime * self.insurable_mean)
        )

    def label(self) -> str:
        return (
            f"u={self.utility.label()}|F={self.total_loss.label()}"
            f"|w={self.w:g}|lp={self.lambda_prime:g}|EL={self.insurable_mean:g}"
        )


def sensitivity_expected_utility(
    ss: SensitivityScenario, theta: float, spec: QuadratureSpec | None = None
) -> float:
    """E[U(w - L + theta (L - lambda' E(L)))] under the total-loss density."""
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    return integrate(
        lambda x: ss.utility.evaluate(ss.wealth_at(x, theta)) * ss.total_loss.pdf(x),
        0.0,
        ss.total_loss.v,
        spec=spec,
    )


def sensitivity_foc(
    ss: SensitivityScenario, theta: float, spec: QuadratureSpec | None = None
) -> float:
    """First-order condition E[U'(W) (L - lambda' E(L))] of the reduced model."""
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    pm = ss.lambda_prime * ss.insurable_mean
    return integrate(
        lambda x: ss.utility.marginal(ss.wealth_at(x, theta))
        * (x - pm)
        * ss.total_loss.pdf(x),
        0.0,
        ss.total_loss.v,
        spec=spec,
    )


def sensitivity_optimal_theta(
    ss: SensitivityScenario,
    x_tol: float = _DEFAULT_X_TOL,
    spec: QuadratureSpec | None = None,
) -> SolveResult:
    """Optimal liability level of the reduced model over [0, 1]."""
    return _solve_concave(
        lambda t: sensitivity_foc(ss, t, spec=spec),
        lambda t: sensitivity_expected_utility(ss, t, spec=spec),
        x_tol,
    )


@dataclass(frozen=True)
class ThetaSensitivity:
    """Estimate of d(theta*)/d(lambda').

    ``value`` is the analytic ratio; ``finite_difference`` the central
    difference of theta*(lambda') over +-h, with ``noise_floor`` the
    solver-tolerance-driven error bar on that difference.  At a boundary
    optimum no derivative is claimed: value is zero and ``boundary`` is
    set.
    """

    value: float
    finite_difference: float | None
    noise_floor: float
    boundary: Boundary | None = None

    @property
    def at_boundary(self) -> bool:
        return self.boundary is not None


def _cross_derivative(
    ss: SensitivityScenario, theta_star: float, spec: QuadratureSpec | None
) -> float:
    """d(FOC)/d(lambda') at fixed theta: E[-U'' theta* E(L) (L - lambda' E(L)) - U' E(L)]."""
    el = ss.insurable_mean
    pm = ss.lambda_prime * el
    return integrate(
        lambda x: (
            -ss.utility.second(ss.wealth_at(x, theta_star)) * theta_star * el * (x - pm)
            - ss.utility.marginal(ss.wealth_at(x, theta_star)) * el
        )
        * ss.total_loss.pdf(x),
        0.0,
        ss.total_loss.v,
        spec=spec,
    )


def _theta_curvature(
    ss: SensitivityScenario, theta_star: float, spec: QuadratureSpec | None
) -> float:
    """d(FOC)/d(theta): E[U''(W) (L - lambda' E(L))^2], negative under concavity."""
    pm = ss.lambda_prime * ss.insurable_mean
    return integrate(
        lambda x: ss.utility.second(ss.wealth_at(x, theta_star))
        * (x - pm) ** 2
        * ss.total_loss.pdf(x),
        0.0,
        ss.total_loss.v,
        spec=spec,
    )


def dtheta_dlambda(
    ss: SensitivityScenario,
    h: float = 1e-3,
    x_tol: float = 1e-11,
    spec: QuadratureSpec | None = None,
    base: SolveResult | None = None,
) -> ThetaSensitivity:
    """Premium sensitivity of demand, d(theta*)/d(lambda'), two ways.

    Analytically via the implicit-function ratio (minus the cross
    derivative of the first-order condition over its theta-curvature) and
    numerically as a central difference of theta*(lambda') with step
    ``h``; the two must agree to the finite-difference noise level.  A
    boundary optimum returns value zero and the boundary flag instead.
    """
    if not h > 0.0:
        raise DomainError(f"step size must be > 0, got {h}")
    if base is None:
        base = sensitivity_optimal_theta(ss, x_tol=x_tol, spec=spec)
    noise = x_tol / h
    if base.boundary is not Boundary.INTERIOR:
        return ThetaSensitivity(0.0, None, noise, boundary=base.boundary)

    cross = _cross_derivative(ss, base.theta_star, spec)
    curvature = _theta_curvature(ss, base.theta_star, spec)
    analytic = -cross / curvature

    lo = max(ss.lambda_prime - h, 1.0)
    hi = ss.lambda_prime + h
    theta_lo = sensitivity_optimal_theta(
        dataclasses.replace(ss, lambda_prime=lo), x_tol=x_tol, spec=spec
    ).theta_star
    theta_hi = sensitivity_optimal_theta(
        dataclasses.replace(ss, lambda_prime=hi), x_tol=x_tol, spec=spec
    ).theta_star
    fd = (theta_hi - theta_lo) / (hi - lo)
    return ThetaSensitivity(analytic, fd, noise, boundary=None)


@dataclass(frozen=True)
class DemandPoint:
    """One point of the demand curve theta*(lambda')."""

    lambda_prime: float
    theta_star: float
    eu: float
    boundary: Boundary
    foc_residual: float
    error: str | None = None


def demand_curve(
    ss: SensitivityScenario,
    lambda_grid: Sequence[float],
    x_tol: float = _DEFAULT_X_TOL,
    spec: QuadratureSpec | None = None,
) -> list[DemandPoint]:
    """Optimal liability level along an ascending grid of gross loadings.

    Each grid point is solved independently; a failure at one point is
    recorded on its row (NaN fields plus the error message) and the sweep
    continues.
    """
    grid = [float(lp) for lp in lambda_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("lambda grid must be sorted ascending")
    points: list[DemandPoint] = []
    for lp in grid:
        try:
            res = sensitivity_optimal_theta(
                dataclasses.replace(ss, lambda_prime=lp), x_tol=x_tol, spec=spec
            )
            points.append(
                DemandPoint(lp, res.theta_star, res.eu_at_star, res.boundary, res.foc_at_star)
            )
        except Exception as exc:  # record, keep sweeping
            points.append(
                DemandPoint(lp, float("nan"), float("nan"), Boundary.INTERIOR, float("nan"), str(exc))
            )
    return points
