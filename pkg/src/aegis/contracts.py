"""Indemnity functions, premium computation, and the Aegis contract.

An Aegis contract advertises an indemnity schedule ``I`` on insurable
losses together with a full-liability premium ``P = (1 + lambda) E[I(L_s)]``
(``lambda`` is the actuarial loading; zero means a fair premium).  The
insured then picks a liability level ``theta`` in [0, 1], receives
``theta * I(L_s)`` in coverage, and pays ``theta * P``; ``theta = 1`` with
full coverage reproduces a traditional contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .losses import MixedLossModel, insurable_expected_loss
from .numerics import QuadratureSpec

__all__ = ["IndemnityKind", "IndemnityFunction", "AegisContract", "premium"]


class IndemnityKind(str, Enum):
    FULL = "full"
    DEDUCTIBLE = "deductible"


@dataclass(frozen=True)
class IndemnityFunction:
    """Coverage schedule, either full (I(L) = L) or above a deductible.

    Satisfies 0 <= I(L) <= L and is nondecreasing in L.
    """

    kind: IndemnityKind
    deductible: float = 0.0

    def __post_init__(self):
        if self.deductible < 0.0:
            raise DomainError(f"deductible must be >= 0, got {self.deductible}")
        if self.kind is IndemnityKind.FULL and self.deductible != 0.0:
            raise DomainError("full coverage takes no deductible")

    @classmethod
    def full(cls) -> "IndemnityFunction":
        return cls(IndemnityKind.FULL)

    @classmethod
    def with_deductible(cls, d: float) -> "IndemnityFunction":
        return cls(IndemnityKind.DEDUCTIBLE, float(d))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Kink locations, passed to quadrature as split points."""
        if self.kind is IndemnityKind.DEDUCTIBLE and self.deductible > 0.0:
            return (self.deductible,)
        return ()

    def __call__(self, loss):
        if np.any(np.asarray(loss) < 0.0):
            raise DomainError(f"loss must be >= 0, got {loss!r}")
        if self.kind is IndemnityKind.FULL:
            return np.asarray(loss, dtype=float) if np.ndim(loss) else float(loss)
        out = np.maximum(np.asarray(loss, dtype=float) - self.deductible, 0.0)
        return out if out.ndim else float(out)

    def label(self) -> str:
        if self.kind is IndemnityKind.FULL:
            return "full"
        return f"deductible(d={self.deductible:g})"


@dataclass(frozen=True)
class AegisContract:
    """Liability level theta, premium loading, and indemnity schedule.

    ``theta`` stored here is the contract's default liability level; the
    solver treats it as a decision variable and only uses the stored value
    as an initial/reporting point.
    """

    theta: float
    loading: float
    indemnity: IndemnityFunction

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise DomainError(f"theta must lie in [0, 1], got {self.theta}")
        if self.loading < 0.0:
            raise DomainError(f"loading must be >= 0, got {self.loading}")

    def label(self) -> str:
        return f"{self.indemnity.label()}|lambda={self.loading:g}"


def premium(
    m: MixedLossModel, c: AegisContract, spec: QuadratureSpec | None = None
) -> float:
    """Full-liability premium P = (1 + loading) * alpha * E[I(L_s)].

    The insured at liability level theta pays theta * P.  The premium is a
    function of the security-loss channel only; the non-security density
    never enters.
    """
    return (1.0 + c.loading) * insurable_expected_loss(m, c.indemnity, spec=spec)
