"""Small numerically stable helpers shared across modules."""

from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate

_LOG_HALF = -math.log(2.0)


def log1mexp(x):
    """Evaluate ``log(1 - exp(x))`` for ``x <= 0`` without cancellation.

    Uses the two-branch rule: ``log(-expm1(x))`` near zero and
    ``log1p(-exp(x))`` further out. ``x == 0`` maps to ``-inf``.
    """
    x = np.asarray(x, dtype=float)
    clipped = np.minimum(x, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        near = clipped > _LOG_HALF
        out = np.log1p(-np.exp(clipped))
        if near.any():
            out = np.where(near, np.log(-np.expm1(clipped)), out)
    if (x > 0).any():
        out = np.where(x > 0, np.nan, out)
    return out[()] if out.ndim == 0 else out


def log_neg_log1mexp(x):
    """Evaluate ``log(-log(1 - exp(x)))`` for ``x <= 0``.

    For very negative ``x`` the inner logarithm underflows to ``-0``; there
    the expansion ``x + exp(x) / 2`` is used instead.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(-log1mexp(np.maximum(x, -20.0)))
        out = np.where(x < -20.0, x + 0.5 * np.exp(x), direct)
    return out[()] if out.ndim == 0 else out


def log1mexp_scaled(scale: float, log_x, log_neg_x):
    """Evaluate ``log(1 - exp(scale * log_x))`` when ``log_x`` may round to zero.

    ``log_neg_x`` is ``log(-log_x)`` computed accurately by the caller. Small
    arguments use ``log(-z) + log1p(z/2 + z**2/6)`` with ``z = scale * log_x``.
    """
    z = scale * np.asarray(log_x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        small = math.log(scale) + np.asarray(log_neg_x) + np.log1p(z / 2.0 + z * z / 6.0)
        out = np.where(z > -1e-5, small, log1mexp(np.minimum(z, -1e-5)))
    return out[()] if out.ndim == 0 else out


def xlogy_safe(coef, logval):
    """Return ``coef * logval`` with the convention ``0 * (-inf) = 0``."""
    logval = np.asarray(logval, dtype=float)
    if np.ndim(coef) == 0:
        coef = float(coef)
        if coef == 0.0:
            return np.zeros_like(logval)
        return coef * logval
    coef = np.asarray(coef, dtype=float)
    with np.errstate(invalid="ignore"):
        out = coef * logval
    return np.where(coef == 0, 0.0, out)


class IntegrationError(ArithmeticError):
    """Raised when an integral cannot be evaluated to a finite value."""


class DivergenceError(IntegrationError):
    """Raised when an integral diverges in the upper tail."""


# Probability levels used to cut the support into pieces for quadrature.
_SPLIT_LEVELS = (
    1e-12, 1e-8, 1e-4, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99,
    1 - 1e-4, 1 - 1e-8, 1 - 1e-12,
)


_LOG_MAX = math.log(np.finfo(float).max)


def integrate_over_quantiles(
    func: Callable[[float], float],
    quantile: Callable[[float], float],
    *,
    lower: float,
    upper: float,
    epsabs: float = 1e-10,
    epsrel: float = 1e-8,
    check_tail: bool = True,
) -> float:
    """Integrate ``func`` over a distribution's support.

    The support is cut at the distribution's quantiles at fixed probability
    levels so adaptive quadrature sees each region of mass at a sensible
    scale. The outermost pieces reach the finite support end points, while an
    infinite upper end point is handled by a final piece running to infinity,
    preceded (when ``check_tail`` is set) by a growth test comparing two
    successive far-tail slabs.

    Raises:
        DivergenceError: if the tail contribution fails to shrink.
        IntegrationError: if the total is not finite.
    """
    knots = [float(quantile(p)) for p in _SPLIT_LEVELS]
    lo = lower if math.isfinite(lower) else knots[0]
    hi = upper if math.isfinite(upper) else knots[-1]
    pts = np.unique(np.clip([lo, *knots, hi], lo, hi))

    def on_log_scale(y: float) -> float:
        t = math.exp(y) if y < _LOG_MAX else math.inf
        val = func(t)
        return 0.0 if val == 0.0 else val * t

    def piece(x0: float, x1: float) -> float:
        if not x1 > x0:
            return 0.0
        # Positive pieces are integrated in log t, which keeps power-law
        # tails spanning many decades resolvable.
        if x0 > 0.0:
            f, x0, x1 = on_log_scale, math.log(x0), math.log(x1)
        else:
            f = func
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _err = integrate.quad(f, x0, x1, epsabs=epsabs, epsrel=epsrel, limit=200)
        return val

    if check_tail and not math.isfinite(upper):
        # Compare two successive tail slabs; a convergent tail shrinks.
        q4, q6, q8 = (float(quantile(1 - e)) for e in (1e-4, 1e-6, 1e-8))
        first = abs(piece(q4, q6))
        second = abs(piece(q6, q8))
        if not math.isfinite(second) or (second > 1e-14 and second >= 0.9 * first):
            raise DivergenceError("integral diverges in the upper tail")

    total = 0.0
    for x0, x1 in zip(pts[:-1], pts[1:]):
        total += piece(float(x0), float(x1))
    if not math.isfinite(upper):
        total += piece(float(pts[-1]), math.inf)
    if not math.isfinite(total):
        raise IntegrationError("integral is not finite")
    return float(total)
