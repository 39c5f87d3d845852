"""Loss distributions on [0, v], the mixed loss structure, and sampling.

The model distinguishes two loss channels that never fire together: an
insurable loss from a security attack (density ``f_s``, probability
``alpha``) and a non-insurable loss from a non-security failure (density
``f_ns``, probability ``1 - alpha - beta``), with probability ``beta`` of
no loss at all.  Both marginal densities live on the common support
``[0, v]``; the joint density is zero everywhere both losses would be
positive, so every expectation in the model reduces to one-dimensional
integrals.

Stochastically larger variants of a distribution are generated with the
CDF power transform ``F -> F^(1+t)``, which is smooth, keeps the support,
and is provably increasing (in the first-order stochastic dominance sense)
in ``t``.  Truncated location shifts were rejected because they put an
atom at ``v``.
"""

from __future__ import annotations

import abc
import functools
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import betainc, betaincinv, gammaln

from .errors import DomainError
from .numerics import QuadratureSpec, integrate

__all__ = [
    "LossDistribution",
    "Uniform",
    "TruncatedExponential",
    "ScaledBeta",
    "PowerShifted",
    "FosdOrder",
    "fosd_compare",
    "fosd_shift",
    "MixedLossModel",
    "LossSample",
    "sample_loss",
    "sample_losses",
    "insurable_expected_loss",
]


class LossDistribution(abc.ABC):
    """A univariate, atomless loss distribution supported on [0, v].

    ``pdf``/``cdf`` accept scalars or arrays and clamp outside the support
    (density 0; CDF 0 below and 1 above).  ``quantile`` is the inverse CDF
    and doubles as the value-at-risk at level p.
    """

    v: float

    @abc.abstractmethod
    def pdf(self, x): ...

    @abc.abstractmethod
    def cdf(self, x): ...

    @abc.abstractmethod
    def quantile(self, p): ...

    @abc.abstractmethod
    def mean(self) -> float: ...

    @abc.abstractmethod
    def label(self) -> str: ...

    def _check_support(self):
        if not self.v > 0.0:
            raise DomainError(f"support upper bound must be > 0, got {self.v}")

    @staticmethod
    def _check_prob(p):
        p_arr = np.asarray(p, dtype=float)
        if np.any(p_arr < 0.0) or np.any(p_arr > 1.0):
            raise DomainError(f"probability outside [0, 1]: {p!r}")


@dataclass(frozen=True)
class Uniform(LossDistribution):
    """Uniform loss on [0, v]."""

    v: float = 1.0

    def __post_init__(self):
        self._check_support()

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where((x >= 0.0) & (x <= self.v), 1.0 / self.v, 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip(x / self.v, 0.0, 1.0)
        return out if out.ndim else float(out)

    def quantile(self, p):
        self._check_prob(p)
        return p * self.v

    def mean(self) -> float:
        return 0.5 * self.v

    def label(self) -> str:
        return "uniform"


@dataclass(frozen=True)
class TruncatedExponential(LossDistribution):
    """Exponential with the given rate, truncated and renormalized to [0, v]."""

    rate: float
    v: float = 1.0

    def __post_init__(self):
        self._check_support()
        if not self.rate > 0.0:
            raise DomainError(f"rate must be > 0, got {self.rate}")

    @property
    def _norm(self) -> float:
        return -np.expm1(-self.rate * self.v)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= 0.0) & (x <= self.v)
        out = np.where(
            inside, self.rate * np.exp(-self.rate * np.where(inside, x, 0.0)) / self._norm, 0.0
        )
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        clipped = np.clip(x, 0.0, self.v)
        out = -np.expm1(-self.rate * clipped) / self._norm
        return out if out.ndim else float(out)

    def quantile(self, p):
        self._check_prob(p)
        p = np.asarray(p, dtype=float)
        out = -np.log1p(-p * self._norm) / self.rate
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return 1.0 / self.rate - self.v * np.exp(-self.rate * self.v) / self._norm

    def label(self) -> str:
        return f"trunc_exp(rate={self.rate:g})"


@dataclass(frozen=True)
class ScaledBeta(LossDistribution):
    """Beta(p, q) distribution rescaled from [0, 1] to [0, v]."""

    p: float
    q: float
    v: float = 1.0

    def __post_init__(self):
        self._check_support()
        if not (self.p > 0.0 and self.q > 0.0):
            raise DomainError(f"beta shape parameters must be > 0, got ({self.p}, {self.q})")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        z = x / self.v
        inside = (z >= 0.0) & (z <= 1.0)
        zc = np.clip(z, 0.0, 1.0)
        log_norm = gammaln(self.p + self.q) - gammaln(self.p) - gammaln(self.q)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_pdf = (
                log_norm
                + (self.p - 1.0) * np.log(zc)
                + (self.q - 1.0) * np.log1p(-zc)
                - np.log(self.v)
            )
            dens = np.exp(log_pdf)
        dens = np.where(np.isnan(dens), 0.0, dens)
        out = np.where(inside, dens, 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        z = np.clip(x / self.v, 0.0, 1.0)
        out = betainc(self.p, self.q, z)
        return out if out.ndim else float(out)

    def quantile(self, p):
        self._check_prob(p)
        p = np.asarray(p, dtype=float)
        out = self.v * betaincinv(self.p, self.q, p)
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return self.v * self.p / (self.p + self.q)

    def label(self) -> str:
        return f"scaled_beta(p={self.p:g},q={self.q:g})"


@dataclass(frozen=True)
class PowerShifted(LossDistribution):
    """CDF power transform of a base distribution: F(x) = base_cdf(x)^(1+t).

    For t >= 0 the transform is stochastically larger than the base (the
    CDF can only drop pointwise) and t = 0 is the identity.  The quantile
    follows by inverting the composition: q(p) = base_q(p^(1/(1+t))).
    """

    base: LossDistribution
    t: float

    def __post_init__(self):
        if self.t < 0.0:
            raise DomainError(f"power shift requires t >= 0, got {self.t}")

    @property
    def v(self) -> float:  # type: ignore[override]
        return self.base.v

    def pdf(self, x):
        base_cdf = np.asarray(self.base.cdf(x), dtype=float)
        out = (1.0 + self.t) * np.power(base_cdf, self.t) * self.base.pdf(x)
        return out if out.ndim else float(out)

    def cdf(self, x):
        out = np.power(np.asarray(self.base.cdf(x), dtype=float), 1.0 + self.t)
        return out if out.ndim else float(out)

    def quantile(self, p):
        self._check_prob(p)
        p = np.asarray(p, dtype=float)
        out = self.base.quantile(np.power(p, 1.0 / (1.0 + self.t)))
        return out if out.ndim else float(out)

    @functools.cached_property
    def _mean(self) -> float:
        # E[X] = integral of the survival function over [0, v].
        return integrate(lambda x: 1.0 - self.cdf(x), 0.0, self.v)

    def mean(self) -> float:
        return self._mean

    def label(self) -> str:
        return f"pow_shift({self.base.label()},t={self.t:g})"


class FosdOrder(str, Enum):
    D1_SMALLER = "d1_smaller"
    D2_SMALLER = "d2_smaller"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def fosd_compare(
    d1: LossDistribution,
    d2: LossDistribution,
    grid_size: int = 1001,
    tol: float = 1e-10,
) -> FosdOrder:
    """Order two distributions by first-order stochastic dominance.

    Compares quantiles (values-at-risk) on a uniform probability grid:
    ``d1`` is smaller when its p-quantile never exceeds that of ``d2`` and
    is strictly below somewhere.  Quantile curves within ``tol`` of each
    other everywhere compare EQUAL; curves that cross are INCOMPARABLE.
    """
    if grid_size < 2:
        raise DomainError(f"grid_size must be >= 2, got {grid_size}")
    if d1.v != d2.v:
        raise DomainError(
            f"distributions have mismatched supports: [0, {d1.v}] vs [0, {d2.v}]"
        )
    ps = np.linspace(0.0, 1.0, grid_size)
    diff = np.asarray(d2.quantile(ps)) - np.asarray(d1.quantile(ps))
    if np.all(np.abs(diff) <= tol):
        return FosdOrder.EQUAL
    if np.all(diff >= -tol):
        return FosdOrder.D1_SMALLER
    if np.all(diff <= tol):
        return FosdOrder.D2_SMALLER
    return FosdOrder.INCOMPARABLE


def fosd_shift(d: LossDistribution, t: float) -> LossDistribution:
    """Stochastically enlarge ``d`` by the CDF power transform F^(1+t)."""
    if t < 0.0:
        raise DomainError(f"fosd_shift requires t >= 0, got {t}")
    return PowerShifted(d, float(t))


@dataclass(frozen=True)
class LossSample:
    """One realized draw; at most one of the two losses is nonzero."""

    l_s: float
    l_ns: float


@dataclass(frozen=True)
class MixedLossModel:
    """Joint structure of the two mutually exclusive loss channels.

    ``alpha`` is the probability of a security loss (drawn from ``f_s``),
    ``beta`` the probability of no loss, and the remainder
    ``1 - alpha - beta`` the probability of a non-security loss (drawn
    from ``f_ns``).  Both marginals must share the same support bound.
    """

    alpha: float
    beta: float
    f_s: LossDistribution
    f_ns: LossDistribution

    def __post_init__(self):
        if self.alpha < 0.0 or self.beta < 0.0:
            raise DomainError(
                f"probabilities must be nonnegative, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.alpha + self.beta > 1.0:
            raise DomainError(
                f"alpha + beta must be <= 1, got {self.alpha} + {self.beta} "
                f"= {self.alpha + self.beta}"
            )
        if self.f_s.v != self.f_ns.v:
            raise DomainError(
                f"marginals must share a support bound, got {self.f_s.v} vs {self.f_ns.v}"
            )

    @property
    def v(self) -> float:
        return self.f_s.v

    @property
    def non_security_prob(self) -> float:
        return 1.0 - self.alpha - self.beta

    def label(self) -> str:
        return (
            f"alpha={self.alpha:g}|beta={self.beta:g}"
            f"|fS={self.f_s.label()}|fNS={self.f_ns.label()}"
        )


def sample_losses(
    m: MixedLossModel, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` loss pairs; returns arrays ``(l_s, l_ns)``.

    Each draw consumes exactly two uniforms from ``rng`` (one to pick the
    channel, one inverted through the channel's quantile), so identical
    seeds reproduce identical streams regardless of batching.
    """
    if n < 1:
        raise DomainError(f"need n >= 1 draws, got {n}")
    cat = rng.random(n)
    u = rng.random(n)
    no_loss = cat < m.beta
    security = ~no_loss & (cat < m.beta + m.alpha)
    non_security = ~no_loss & ~security
    l_s = np.where(security, m.f_s.quantile(u), 0.0)
    l_ns = np.where(non_security, m.f_ns.quantile(u), 0.0)
    return l_s, l_ns


def sample_loss(m: MixedLossModel, rng: np.random.Generator) -> LossSample:
    """Draw a single loss pair."""
    l_s, l_ns = sample_losses(m, 1, rng)
    return LossSample(float(l_s[0]), float(l_ns[0]))


def insurable_expected_loss(
    m: MixedLossModel, indemnity, spec: QuadratureSpec | None = None
) -> float:
    """Expected indemnified amount: alpha * E[I(L_s)].

    ``indemnity`` is any callable mapping loss arrays to coverage arrays;
    an optional ``breakpoints`` attribute lists its kink locations so the
    quadrature can pre-split there.  Only the security channel enters: the
    insurer covers nothing else.
    """
    if m.alpha == 0.0:
        return 0.0
    splits = tuple(getattr(indemnity, "breakpoints", ()))
    value = integrate(
        lambda x: np.asarray(indemnity(x), dtype=float) * m.f_s.pdf(x),
        0.0,
        m.v,
        spec=spec,
        split_points=splits,
    )
    return m.alpha * value
