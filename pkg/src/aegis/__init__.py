"""Expected-utility analysis of Aegis (co-insurance) cyber contracts.

A numerical library and scenario runner for insurance demand when an agent
faces both insurable security losses and non-insurable failures: utility
families with exact Arrow-Pratt measures, loss distributions on a common
bounded support with a first-order-stochastic-dominance shift family,
premium and indemnity modeling, optimal liability solving, and executable
checkers for the model's comparative-statics claims.
"""

from .contracts import AegisContract, IndemnityFunction, IndemnityKind, premium
from .errors import AegisError, ConfigError, DomainError, NonConvergenceError
from .losses import (
    FosdOrder,
    LossSample,
    MixedLossModel,
    PowerShifted,
    ScaledBeta,
    TruncatedExponential,
    Uniform,
    fosd_compare,
    fosd_shift,
    insurable_expected_loss,
    sample_loss,
    sample_losses,
)
from .numerics import OptimizeSpec, QuadratureSpec, central_diff, integrate, maximize_scalar
from .preferences import UtilityFamily, UtilityFunction
from .solver import (
    Boundary,
    DemandPoint,
    Scenario,
    SensitivityScenario,
    SolveResult,
    ThetaSensitivity,
    demand_curve,
    dtheta_dlambda,
    eu_theta_derivative,
    expected_utility,
    final_wealth,
    optimal_theta,
    sensitivity_expected_utility,
    sensitivity_foc,
    sensitivity_optimal_theta,
)
from .verification import (
    BatteryConfig,
    TheoremId,
    TheoremReport,
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

__version__ = "0.1.0"
