"""One-dimensional quadrature, bounded scalar maximization, differentiation.

Everything downstream (expected-utility integrals, premium integrals,
first-order-condition solves) is built on the three routines here, so the
default tolerances are kept roughly two orders of magnitude tighter than
the loosest tolerance asserted anywhere in the test suite.

All routines are pure functions of their arguments and hold no state, so
they are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError, NonConvergenceError

__all__ = [
    "QuadratureSpec",
    "OptimizeSpec",
    "integrate",
    "maximize_scalar",
    "central_diff",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Error control for adaptive quadrature.

    An interval is accepted once its local Richardson error estimate drops
    below the share of ``max(abs_tol, rel_tol * |integral|)`` apportioned to
    it by width.  ``max_subdivisions`` caps the total number of interval
    bisections before :class:`NonConvergenceError` is raised.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol}")
        if self.rel_tol < 0.0:
            raise DomainError(f"rel_tol must be >= 0, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise DomainError(
                f"max_subdivisions must be >= 1, got {self.max_subdivisions}"
            )


@dataclass(frozen=True)
class OptimizeSpec:
    """Stopping rule for bounded scalar maximization.

    ``x_tol`` is an absolute tolerance on the argument of the maximum.
    """

    x_tol: float = 1e-7
    max_iters: int = 200

    def __post_init__(self):
        if not self.x_tol > 0.0:
            raise DomainError(f"x_tol must be > 0, got {self.x_tol}")
        if self.max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {self.max_iters}")


def _eval_vectorized(f, x: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` elementwise, broadcasting scalar-valued callables."""
    y = np.asarray(f(x), dtype=float)
    if y.ndim == 0:
        y = np.full_like(x, float(y))
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)]
        raise DomainError(f"integrand is non-finite at x={bad[0]!r}")
    return y


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
    split_points: Iterable[float] = (),
) -> float:
    """Adaptive Simpson quadrature of ``f`` over ``[lo, hi]``.

    The integrand must accept a numpy array of abscissae and evaluate
    elementwise (any expression built from numpy ufuncs qualifies).  Known
    interior kinks -- e.g. the corner a deductible puts into the coverage
    integrand -- should be passed as ``split_points`` so refinement stays
    local instead of thrashing around the kink.

    Args:
        f: integrand, finite on ``[lo, hi]``.
        lo, hi: integration bounds, ``lo <= hi``.
        spec: error control; defaults to :class:`QuadratureSpec()`.
        split_points: abscissae at which to pre-split the interval.
            Points outside ``(lo, hi)`` are ignored.

    Returns:
        The integral estimate, accurate to
        ``max(abs_tol, rel_tol * |integral|)`` for piecewise-smooth ``f``.

    Raises:
        DomainError: if ``lo > hi`` or the integrand is non-finite.
        NonConvergenceError: if the subdivision budget is exhausted; the
            exception carries the best estimate and an error bound.
    """
    spec = spec or QuadratureSpec()
    if lo > hi:
        raise DomainError(f"integration bounds out of order: [{lo}, {hi}]")
    if lo == hi:
        return 0.0

    pts = sorted({float(p) for p in split_points if lo < p < hi})
    edges = np.array([lo, *pts, hi], dtype=float)
    a = edges[:-1]
    b = edges[1:]
    m = 0.5 * (a + b)
    fa = _eval_vectorized(f, a)
    fm = _eval_vectorized(f, m)
    fb = _eval_vectorized(f, b)
    s = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    width_total = hi - lo
    accepted = 0.0
    subdivisions = 0

    while a.size:
        estimate = accepted + float(np.sum(s))
        tol = max(spec.abs_tol, spec.rel_tol * abs(estimate))

        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = _eval_vectorized(f, lm)
        frm = _eval_vectorized(f, rm)
        s_left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        s_right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        s2 = s_left + s_right
        err = (s2 - s) / 15.0

        # Accept when the local error fits the width-apportioned budget;
        # vanishing widths are accepted to dodge floating-point stagnation.
        done = (np.abs(err) <= tol * (b - a) / width_total) | (
            (b - a) < 1e-14 * width_total
        )
        accepted += float(np.sum((s2 + err)[done]))

        keep = ~done
        n_split = int(np.count_nonzero(keep))
        if subdivisions + n_split > spec.max_subdivisions:
            best = accepted + float(np.sum((s2 + err)[keep]))
            bound = float(np.sum(np.abs(err[keep])))
            raise NonConvergenceError(
                f"quadrature did not converge within {spec.max_subdivisions} "
                f"subdivisions (estimate {best!r}, error bound {bound!r})",
                estimate=best,
                error_bound=bound,
            )
        subdivisions += n_split

        a = np.concatenate([a[keep], m[keep]])
        b = np.concatenate([m[keep], b[keep]])
        fa = np.concatenate([fa[keep], fm[keep]])
        fb = np.concatenate([fm[keep], fb[keep]])
        m = 0.5 * (a + b)
        fm = np.concatenate([flm[keep], frm[keep]])
        s = np.concatenate([s_left[keep], s_right[keep]])

    return accepted


_GOLDEN_STEP = 0.3819660112501051  # 2 - golden ratio


def maximize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    spec: OptimizeSpec | None = None,
) -> tuple[float, float]:
    """Maximize a unimodal function on ``[lo, hi]``.

    Golden-section search refined by parabolic interpolation (Brent).  The
    routine does not verify unimodality; on a multimodal input it returns
    some local maximum.  If the maximum sits at an endpoint, the endpoint
    is returned exactly.

    Args:
        f: objective, defined on ``[lo, hi]``.
        lo, hi: search interval, ``lo < hi``.
        spec: stopping rule; defaults to :class:`OptimizeSpec()`.

    Returns:
        ``(argmax, max_value)`` with ``|argmax - true argmax| <= x_tol``
        for concave ``f``.

    Raises:
        DomainError: if ``lo >= hi``.
        NonConvergenceError: if ``max_iters`` is exhausted; carries the
            best point found so far.
    """
    spec = spec or OptimizeSpec()
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")

    # Brent on the negated objective.
    def g(t: float) -> float:
        return -f(t)

    a, b = lo, hi
    x = w = v = a + _GOLDEN_STEP * (b - a)
    fx = fw = fv = g(x)
    d = e = 0.0

    converged = False
    for _ in range(spec.max_iters):
        mid = 0.5 * (a + b)
        tol1 = 0.5 * spec.x_tol + 1e-15 * abs(x)
        tol2 = 2.0 * tol1
        if abs(x - mid) <= tol2 - 0.5 * (b - a):
            converged = True
            break

        if abs(e) > tol1:
            # Trial parabola through (x, w, v).
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            e_prev, e = e, d
            if abs(p) >= abs(0.5 * q * e_prev) or p <= q * (a - x) or p >= q * (b - x):
                e = (b - x) if x < mid else (a - x)
                d = _GOLDEN_STEP * e
            else:
                d = p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = tol1 if x < mid else -tol1
        else:
            e = (b - x) if x < mid else (a - x)
            d = _GOLDEN_STEP * e

        u = x + d if abs(d) >= tol1 else x + (tol1 if d > 0 else -tol1)
        fu = g(u)

        if fu <= fx:
            if u >= x:
                a = x
            else:
                b = x
            v, fv, w, fw = w, fw, x, fx
            x, fx = u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv, w, fw = w, fw, u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu

    if not converged:
        raise NonConvergenceError(
            f"maximization did not converge within {spec.max_iters} iterations "
            f"(best point x={x!r}, f={-fx!r})",
            best_point=(x, -fx),
        )

    # Boundary maxima are reported exactly as lo or hi.
    best_x, best_f = x, -fx
    f_hi = f(hi)
    if f_hi >= best_f:
        best_x, best_f = hi, f_hi
    f_lo = f(lo)
    if f_lo >= best_f:
        best_x, best_f = lo, f_lo
    return best_x, best_f


def central_diff(f: Callable[[float], float], x: float, h: float) -> float:
    """Symmetric difference quotient ``(f(x+h) - f(x-h)) / 2h``.

    Second-order accurate for thrice-differentiable ``f``; the caller is
    responsible for ``f`` being defined on ``[x-h, x+h]``.
    """
    if not h > 0.0:
        raise DomainError(f"step size must be > 0, got {h}")
    return (f(x + h) - f(x - h)) / (2.0 * h)
