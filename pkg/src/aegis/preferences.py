"""Risk-averse utility families and Arrow-Pratt risk-aversion measures.

Four families cover the usual ground: constant absolute risk aversion
(CARA), constant relative risk aversion (CRRA with coefficient != 1), the
logarithmic limit of CRRA, and a linear (risk-neutral) control that is
admitted only so tests can switch risk aversion off.  All derivatives and
risk-aversion coefficients are closed-form, never numeric, so that the
theorem checkers work with exact A(W) and A'(W).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

__all__ = ["UtilityFamily", "UtilityFunction"]


class UtilityFamily(str, Enum):
    CARA = "cara"
    CRRA = "crra"
    LOG = "log"
    LINEAR = "linear"


def _match(w, value):
    """Broadcast a constant to the shape of ``w`` (scalar stays scalar)."""
    if np.ndim(w) == 0:
        return float(value)
    return np.full(np.shape(w), float(value))


@dataclass(frozen=True)
class UtilityFunction:
    """A concave utility of wealth u with closed-form u', u'' and A, R.

    ``coef`` is the family parameter: the absolute-risk-aversion level for
    CARA, the relative-risk-aversion level for CRRA; LOG and LINEAR take no
    parameter.  CRRA and LOG are defined only for strictly positive wealth;
    evaluating them at w <= 0 raises :class:`DomainError` rather than
    returning NaN.
    """

    family: UtilityFamily
    coef: float | None = None

    def __post_init__(self):
        if self.family is UtilityFamily.CARA:
            if self.coef is None or not self.coef > 0.0:
                raise DomainError(f"CARA coefficient must be > 0, got {self.coef}")
        elif self.family is UtilityFamily.CRRA:
            if self.coef is None or not self.coef > 0.0:
                raise DomainError(f"CRRA coefficient must be > 0, got {self.coef}")
            if self.coef == 1.0:
                raise DomainError("CRRA coefficient 1 is the LOG family; use log()")
        elif self.coef is not None:
            raise DomainError(f"{self.family.value} takes no parameter")

    # -- constructors -------------------------------------------------------

    @classmethod
    def cara(cls, a: float) -> "UtilityFunction":
        """u(w) = -exp(-a*w), constant absolute risk aversion a."""
        return cls(UtilityFamily.CARA, float(a))

    @classmethod
    def crra(cls, gamma: float) -> "UtilityFunction":
        """u(w) = w^(1-gamma)/(1-gamma), constant relative risk aversion gamma."""
        return cls(UtilityFamily.CRRA, float(gamma))

    @classmethod
    def log(cls) -> "UtilityFunction":
        """u(w) = ln(w), the unit relative-risk-aversion case."""
        return cls(UtilityFamily.LOG)

    @classmethod
    def linear(cls) -> "UtilityFunction":
        """u(w) = w, risk-neutral control (u'' = 0)."""
        return cls(UtilityFamily.LINEAR)

    # -- properties ---------------------------------------------------------

    @property
    def strictly_concave(self) -> bool:
        """True when u'' < 0 everywhere on the domain."""
        return self.family is not UtilityFamily.LINEAR

    def label(self) -> str:
        if self.family is UtilityFamily.CARA:
            return f"cara(a={self.coef:g})"
        if self.family is UtilityFamily.CRRA:
            return f"crra(gamma={self.coef:g})"
        return self.family.value

    def _check_domain(self, w):
        if self.family in (UtilityFamily.CRRA, UtilityFamily.LOG):
            if np.any(np.asarray(w) <= 0.0):
                worst = float(np.min(np.asarray(w, dtype=float)))
                raise DomainError(
                    f"{self.label()} requires strictly positive wealth, got w={worst:g}"
                )

    # -- evaluations (scalar or elementwise on arrays) ----------------------

    def evaluate(self, w):
        """Utility of wealth ``w``."""
        self._check_domain(w)
        if self.family is UtilityFamily.CARA:
            return -np.exp(-self.coef * w)
        if self.family is UtilityFamily.CRRA:
            return np.power(w, 1.0 - self.coef) / (1.0 - self.coef)
        if self.family is UtilityFamily.LOG:
            return np.log(w)
        return w * 1.0

    __call__ = evaluate

    def marginal(self, w):
        """First derivative u'(w) > 0."""
        self._check_domain(w)
        if self.family is UtilityFamily.CARA:
            return self.coef * np.exp(-self.coef * w)
        if self.family is UtilityFamily.CRRA:
            return np.power(w, -self.coef)
        if self.family is UtilityFamily.LOG:
            return 1.0 / w
        return _match(w, 1.0)

    def second(self, w):
        """Second derivative u''(w), negative for the concave families."""
        self._check_domain(w)
        if self.family is UtilityFamily.CARA:
            return -self.coef**2 * np.exp(-self.coef * w)
        if self.family is UtilityFamily.CRRA:
            return -self.coef * np.power(w, -self.coef - 1.0)
        if self.family is UtilityFamily.LOG:
            return -1.0 / (w * w)
        return _match(w, 0.0)

    def absolute_risk_aversion(self, w):
        """Arrow-Pratt absolute measure A(w) = -u''(w)/u'(w)."""
        self._check_domain(w)
        if self.family is UtilityFamily.CARA:
            return _match(w, self.coef)
        if self.family is UtilityFamily.CRRA:
            return self.coef / w
        if self.family is UtilityFamily.LOG:
            return 1.0 / w
        return _match(w, 0.0)

    def relative_risk_aversion(self, w):
        """Arrow-Pratt relative measure R(w) = w * A(w)."""
        self._check_domain(w)
        if self.family is UtilityFamily.CARA:
            return self.coef * w
        if self.family is UtilityFamily.CRRA:
            return _match(w, self.coef)
        if self.family is UtilityFamily.LOG:
            return _match(w, 1.0)
        return _match(w, 0.0)

    def ara_derivative(self, w):
        """dA/dw, closed form (zero for CARA, -coef/w^2 for CRRA, -1/w^2 for LOG)."""
        self._check_domain(w)
        if self.family is UtilityFamily.CARA:
            return _match(w, 0.0)
        if self.family is UtilityFamily.CRRA:
            return -self.coef / (w * w)
        if self.family is UtilityFamily.LOG:
            return -1.0 / (w * w)
        return _match(w, 0.0)
