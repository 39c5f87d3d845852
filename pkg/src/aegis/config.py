"""Scenario configuration: a flat key-value text format with dotted keys.

Example::

    # reference scenario
    wealth.w0 = 2.0
    wealth.v = 1.0

    losses.alpha = 0.4
    losses.beta = 0.2
    losses.f_s.family = uniform
    losses.f_ns.family = trunc_exp
    losses.f_ns.rate = 1.0

    contract.indemnity = full
    contract.lambda = 0.0
    contract.theta_default = 1.0

    utility.family = crra
    utility.gamma = 2.0

    run.rng_seed = 42
    run.output_path = out/solve.csv

Lines are ``key = value``; ``#`` starts a comment.  Unknown keys are
rejected, duplicate keys are rejected, and every validation failure names
the offending key and line.  Grids are written either as comma lists
(``1.0,1.1,1.25``) or as ranges ``lo:hi:n`` / ``lo:hi:n:log``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contracts import AegisContract, IndemnityFunction
from .errors import AegisError, ConfigError
from .losses import (
    LossDistribution,
    MixedLossModel,
    ScaledBeta,
    TruncatedExponential,
    Uniform,
)
from .preferences import UtilityFunction
from .solver import Scenario, SensitivityScenario
from .verification import BatteryConfig, TheoremId

__all__ = [
    "ConfigDoc",
    "parse_config",
    "parse_grid",
    "load_scenario",
    "load_sensitivity_scenario",
    "load_battery",
    "RunSettings",
]

_KNOWN_KEYS = {
    "wealth.w0",
    "wealth.v",
    "losses.alpha",
    "losses.beta",
    "losses.f_s.family",
    "losses.f_s.rate",
    "losses.f_s.p",
    "losses.f_s.q",
    "losses.f_ns.family",
    "losses.f_ns.rate",
    "losses.f_ns.p",
    "losses.f_ns.q",
    "losses.total.family",
    "losses.total.rate",
    "losses.total.p",
    "losses.total.q",
    "contract.indemnity",
    "contract.deductible",
    "contract.lambda",
    "contract.theta_default",
    "utility.family",
    "utility.a",
    "utility.gamma",
    "run.rng_seed",
    "run.output_path",
    "run.samples",
    "run.lambda_grid",
    "run.t_grid",
    "battery.theorems",
    "battery.t1_deriv_threshold",
    "battery.t2_step_tol",
    "battery.t3_rise_tol",
    "battery.l_grid_points",
}

_REQUIRED = object()


@dataclass
class ConfigDoc:
    """Parsed key-value document with line anchors for error reporting."""

    entries: dict[str, tuple[str, int]] = field(default_factory=dict)

    def has(self, key: str) -> bool:
        return key in self.entries

    def line(self, key: str) -> int | None:
        return self.entries[key][1] if key in self.entries else None

    def raw(self, key: str, default=_REQUIRED) -> str:
        if key not in self.entries:
            if default is _REQUIRED:
                raise ConfigError("required key is missing", key=key)
            return default
        return self.entries[key][0]

    def take_float(self, key: str, default=_REQUIRED) -> float:
        raw = self.raw(key, default)
        if raw is default and key not in self.entries:
            return default
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise ConfigError(
                f"expected a number, got {raw!r}", key=key, line=self.line(key)
            ) from None

    def take_int(self, key: str, default=_REQUIRED) -> int:
        raw = self.raw(key, default)
        if raw is default and key not in self.entries:
            return default
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise ConfigError(
                f"expected an integer, got {raw!r}", key=key, line=self.line(key)
            ) from None

    def take_str(self, key: str, default=_REQUIRED) -> str:
        raw = self.raw(key, default)
        if raw is default and key not in self.entries:
            return default
        return str(raw).strip().lower()

    def fail(self, key: str, message: str):
        raise ConfigError(message, key=key, line=self.line(key))


def parse_config(text: str) -> ConfigDoc:
    """Parse config text, rejecting unknown and duplicate keys."""
    doc = ConfigDoc()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(
                f"expected 'key = value', got {raw_line.strip()!r}", line=lineno
            )
        key, value = line.split("=", 1)
        key = key.strip().lower()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in doc.entries:
            raise ConfigError(
                f"duplicate key (first seen on line {doc.entries[key][1]})",
                key=key,
                line=lineno,
            )
        doc.entries[key] = (value, lineno)
    return doc


def parse_grid(text: str, key: str = "grid", line: int | None = None) -> list[float]:
    """Parse a grid literal: a comma list or ``lo:hi:n[:log]`` range."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ConfigError(
                f"expected 'lo:hi:n' or 'lo:hi:n:log', got {text!r}", key=key, line=line
            )
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"malformed grid range {text!r}", key=key, line=line) from None
        if n < 1:
            raise ConfigError("grid needs >= 1 points", key=key, line=line)
        if n == 1:
            return [lo]
        if len(parts) == 4:
            if lo <= 0.0:
                raise ConfigError("log grid needs lo > 0", key=key, line=line)
            return [float(x) for x in np.geomspace(lo, hi, n)]
        return [float(x) for x in np.linspace(lo, hi, n)]
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"malformed grid list {text!r}", key=key, line=line) from None


_DIST_PARAMS = {
    "uniform": (),
    "trunc_exp": ("rate",),
    "scaled_beta": ("p", "q"),
}


def _distribution(doc: ConfigDoc, prefix: str, v: float) -> LossDistribution:
    family = doc.take_str(f"{prefix}.family")
    if family not in _DIST_PARAMS:
        doc.fail(
            f"{prefix}.family",
            f"unknown family {family!r}; expected one of {sorted(_DIST_PARAMS)}",
        )
    for param in ("rate", "p", "q"):
        key = f"{prefix}.{param}"
        if doc.has(key) and param not in _DIST_PARAMS[family]:
            doc.fail(key, f"not a parameter of family {family!r}")
    try:
        if family == "uniform":
            return Uniform(v)
        if family == "trunc_exp":
            return TruncatedExponential(doc.take_float(f"{prefix}.rate"), v)
        return ScaledBeta(
            doc.take_float(f"{prefix}.p"), doc.take_float(f"{prefix}.q"), v
        )
    except AegisError as exc:
        raise ConfigError(
            str(exc), key=f"{prefix}.family", line=doc.line(f"{prefix}.family")
        ) from exc


def _utility(doc: ConfigDoc) -> UtilityFunction:
    family = doc.take_str("utility.family")
    try:
        if family == "cara":
            if doc.has("utility.gamma"):
                doc.fail("utility.gamma", "not a parameter of family 'cara'")
            return UtilityFunction.cara(doc.take_float("utility.a"))
        if family == "crra":
            if doc.has("utility.a"):
                doc.fail("utility.a", "not a parameter of family 'crra'")
            return UtilityFunction.crra(doc.take_float("utility.gamma"))
        if family in ("log", "linear"):
            for key in ("utility.a", "utility.gamma"):
                if doc.has(key):
                    doc.fail(key, f"not a parameter of family {family!r}")
            return UtilityFunction.log() if family == "log" else UtilityFunction.linear()
    except ConfigError:
        raise
    except AegisError as exc:
        raise ConfigError(
            str(exc), key="utility.family", line=doc.line("utility.family")
        ) from exc
    doc.fail(
        "utility.family",
        f"unknown family {family!r}; expected cara, crra, log, or linear",
    )


def _contract(doc: ConfigDoc) -> AegisContract:
    kind = doc.take_str("contract.indemnity", "full")
    try:
        if kind == "full":
            if doc.has("contract.deductible"):
                doc.fail("contract.deductible", "full coverage takes no deductible")
            indemnity = IndemnityFunction.full()
        elif kind == "deductible":
            indemnity = IndemnityFunction.with_deductible(
                doc.take_float("contract.deductible")
            )
        else:
            doc.fail(
                "contract.indemnity",
                f"unknown indemnity {kind!r}; expected 'full' or 'deductible'",
            )
        return AegisContract(
            theta=doc.take_float("contract.theta_default", 1.0),
            loading=doc.take_float("contract.lambda", 0.0),
            indemnity=indemnity,
        )
    except ConfigError:
        raise
    except AegisError as exc:
        raise ConfigError(
            str(exc), key="contract.indemnity", line=doc.line("contract.indemnity")
        ) from exc


@dataclass(frozen=True)
class RunSettings:
    """Per-run keys shared across commands."""

    rng_seed: int | None
    output_path: str | None
    samples: int | None
    lambda_grid: list[float] | None
    t_grid: list[float] | None


def load_run_settings(doc: ConfigDoc) -> RunSettings:
    lambda_grid = None
    if doc.has("run.lambda_grid"):
        lambda_grid = parse_grid(
            doc.raw("run.lambda_grid"), "run.lambda_grid", doc.line("run.lambda_grid")
        )
    t_grid = None
    if doc.has("run.t_grid"):
        t_grid = parse_grid(doc.raw("run.t_grid"), "run.t_grid", doc.line("run.t_grid"))
    return RunSettings(
        rng_seed=doc.take_int("run.rng_seed", None),
        output_path=doc.raw("run.output_path", None),
        samples=doc.take_int("run.samples", None),
        lambda_grid=lambda_grid,
        t_grid=t_grid,
    )


def load_scenario(doc: ConfigDoc) -> Scenario:
    """Assemble the full-model scenario, re-anchoring invariant failures."""
    w0 = doc.take_float("wealth.w0")
    v = doc.take_float("wealth.v")
    alpha = doc.take_float("losses.alpha")
    beta = doc.take_float("losses.beta")
    f_s = _distribution(doc, "losses.f_s", v)
    f_ns = _distribution(doc, "losses.f_ns", v)
    try:
        losses = MixedLossModel(alpha, beta, f_s, f_ns)
    except AegisError as exc:
        raise ConfigError(
            str(exc), key="losses.alpha", line=doc.line("losses.alpha")
        ) from exc
    utility = _utility(doc)
    contract = _contract(doc)
    try:
        return Scenario(w0=w0, v=v, losses=losses, utility=utility, contract=contract)
    except AegisError as exc:
        raise ConfigError(str(exc), key="wealth.w0", line=doc.line("wealth.w0")) from exc


def load_sensitivity_scenario(doc: ConfigDoc, lambda_prime: float) -> SensitivityScenario:
    """Assemble the reduced model (w = w0 + v, single total-loss density)."""
    w0 = doc.take_float("wealth.w0")
    v = doc.take_float("wealth.v")
    if not doc.has("losses.total.family"):
        raise ConfigError(
            "a gross-loading sweep needs a total-loss density (losses.total.*)",
            key="losses.total.family",
        )
    total = _distribution(doc, "losses.total", v)
    utility = _utility(doc)
    try:
        return SensitivityScenario(
            w=w0 + v, total_loss=total, lambda_prime=lambda_prime, utility=utility
        )
    except AegisError as exc:
        raise ConfigError(str(exc), key="wealth.w0", line=doc.line("wealth.w0")) from exc


def load_battery(doc: ConfigDoc | None) -> BatteryConfig:
    """Default battery, with thresholds and theorem list overridable."""
    config = BatteryConfig.default()
    if doc is None:
        return config
    overrides = {}
    if doc.has("battery.theorems"):
        raw = doc.take_str("battery.theorems")
        if raw in ("none", ""):
            overrides["theorems"] = ()
        else:
            try:
                overrides["theorems"] = tuple(
                    TheoremId(part.strip().upper())
                    for part in raw.split(",")
                    if part.strip()
                )
            except ValueError:
                doc.fail(
                    "battery.theorems",
                    f"expected a comma list drawn from {[t.value for t in TheoremId]}",
                )
    if doc.has("battery.t1_deriv_threshold"):
        overrides["t1_deriv_threshold"] = doc.take_float("battery.t1_deriv_threshold")
    if doc.has("battery.t2_step_tol"):
        overrides["t2_step_tol"] = doc.take_float("battery.t2_step_tol")
    if doc.has("battery.t3_rise_tol"):
        overrides["t3_rise_tol"] = doc.take_float("battery.t3_rise_tol")
    if doc.has("battery.l_grid_points"):
        n = doc.take_int("battery.l_grid_points")
        if n < 2:
            doc.fail("battery.l_grid_points", "needs >= 2 grid points")
        overrides["l_grid_points"] = n
    import dataclasses as _dc

    return _dc.replace(config, **overrides)
