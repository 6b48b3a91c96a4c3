"""Kumaraswamy and generalized Marshall-Olkin generator transforms.

The composed model applies the generalized Marshall-Olkin (GMO) map to the
baseline survival function,

    u(t) = alpha * Gbar(t) / (1 - (1 - alpha) * Gbar(t)),   Fbar_GMO = u**theta,

and then the Kumaraswamy (Kw) map to the resulting cdf,

    Fbar(t) = (1 - (1 - u**theta)**a)**b.

Everything is evaluated in log space: ``log u`` is a negated softplus, the
two bracket logarithms go through ``log1mexp``, so nothing cancels even when
the fitted exponents are tiny.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numeric import log1mexp, log1mexp_scaled, log_neg_log1mexp, xlogy_safe
from .baseline import BaselineModel

__all__ = [
    "FamilyParams",
    "KwGMODistribution",
    "gmo_sf",
    "gmo_pdf",
    "kw_sf",
    "kw_pdf",
    "uniform_stream",
]


_LOG_HALF = math.log(0.5)


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class FamilyParams:
    """Generator parameters: Kw shapes ``a``, ``b``; GMO tilt ``alpha`` and power ``theta``."""

    a: float = 1.0
    b: float = 1.0
    alpha: float = 1.0
    theta: float = 1.0

    def __post_init__(self) -> None:
        for name in ("a", "b", "alpha", "theta"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"family parameter {name} must be positive, got {value}")
            object.__setattr__(self, name, value)

    @property
    def alpha_bar(self) -> float:
        return 1.0 - self.alpha


# ---------------------------------------------------------------------------
# Transform combinators acting on arrays of baseline values.


def _log_odds(log_cdf, log_sf, alpha):
    with np.errstate(invalid="ignore"):
        r = np.asarray(log_cdf) - math.log(alpha) - np.asarray(log_sf)
    return np.where(np.isnan(r), -np.inf, r)


def _log_core_ratio(log_cdf, log_sf, alpha):
    """``log u`` from the baseline log-cdf and log-sf."""
    return -np.logaddexp(0.0, _log_odds(log_cdf, log_sf, alpha))


def _log_core_ratio_parts(log_cdf, log_sf, alpha):
    """``log u`` together with ``log(-log u)``.

    Near the lower support end ``log u`` rounds to ``-0``, so the second value
    is taken from the softplus argument directly.
    """
    r = _log_odds(log_cdf, log_sf, alpha)
    softplus = np.logaddexp(0.0, r)
    with np.errstate(divide="ignore", over="ignore"):
        log_softplus = np.where(r < -20.0, r - 0.5 * np.exp(np.minimum(r, -20.0)), np.log(softplus))
    return -softplus, log_softplus


def gmo_sf(baseline: BaselineModel, alpha: float, theta: float, t):
    """Survival function of the GMO transform of ``baseline``."""
    s = _log_core_ratio(baseline.logcdf(t), baseline.logsf(t), alpha)
    return _out(np.exp(theta * s))


def gmo_pdf(baseline: BaselineModel, alpha: float, theta: float, t):
    """Density of the GMO transform of ``baseline``."""
    return KwGMODistribution(baseline, FamilyParams(1.0, 1.0, alpha, theta)).pdf(t)


def kw_sf(parent_cdf, a: float, b: float):
    """Kw survival ``(1 - F**a)**b`` for an array of parent cdf values."""
    parent_cdf = np.asarray(parent_cdf, dtype=float)
    return _out((1.0 - parent_cdf**a) ** b)


def kw_pdf(parent_pdf, parent_cdf, a: float, b: float):
    """Kw density ``a b f F**(a-1) (1 - F**a)**(b-1)`` from parent values."""
    f = np.asarray(parent_pdf, dtype=float)
    F = np.asarray(parent_cdf, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return _out(a * b * f * F ** (a - 1.0) * (1.0 - F**a) ** (b - 1.0))


def uniform_stream(n: int, seed: int | None) -> np.ndarray:
    """``n`` uniforms strictly inside (0, 1) from a counter-based generator.

    Uses Philox so the stream is reproducible across platforms; each draw is
    a 53-bit integer shifted to the cell midpoint, which excludes 0 and 1.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    return (rng.integers(0, 2**53, size=n, dtype=np.int64) + 0.5) / 2.0**53


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Pieces:
    log_g: np.ndarray
    log_G: np.ndarray
    log_Gbar: np.ndarray
    log_D: np.ndarray  # log(1 - alpha_bar * Gbar)
    log_u: np.ndarray
    log_1m_ut: np.ndarray  # log(1 - u**theta)
    log_1m_w: np.ndarray  # log(1 - (1 - u**theta)**a)


@dataclass(frozen=True)
class KwGMODistribution:
    """Baseline composed with the GMO and Kw transforms.

    Attributes:
        baseline: the baseline distribution.
        params: the generator parameters.
    """

    baseline: BaselineModel
    params: FamilyParams = field(default_factory=FamilyParams)

    @classmethod
    def from_values(cls, baseline: BaselineModel, a=1.0, b=1.0, alpha=1.0, theta=1.0):
        return cls(baseline, FamilyParams(a, b, alpha, theta))

    @property
    def support(self):
        return self.baseline.support

    def pieces(self, t) -> _Pieces:
        """Log-space building blocks shared by all evaluators."""
        p = self.params
        t = np.asarray(t, dtype=float)
        log_g, log_G, log_Gbar = self.baseline.log_components(t)
        log_D = np.logaddexp(log_G, math.log(p.alpha) + log_Gbar)
        log_u, log_neg_log_u = _log_core_ratio_parts(log_G, log_Gbar, p.alpha)
        log_ut = p.theta * log_u
        # Near the lower end u**theta rounds to 1 and deep in the upper tail
        # 1 - u**theta does; both gaps are kept through log(-log(.)).
        log_1m_ut = log1mexp_scaled(p.theta, log_u, log_neg_log_u)
        with np.errstate(divide="ignore"):
            log_neg_log_1m_ut = np.where(
                log_ut < _LOG_HALF, log_neg_log1mexp(log_ut), np.log(-np.minimum(log_1m_ut, 0.0))
            )
        log_1m_w = log1mexp_scaled(p.a, log_1m_ut, log_neg_log_1m_ut)
        return _Pieces(log_g, log_G, log_Gbar, log_D, log_u,
                       np.asarray(log_1m_ut), np.asarray(log_1m_w))

    def _log_core(self, pc: _Pieces) -> np.ndarray:
        """Log density without the ``(b - 1) log(1 - w)`` factor."""
        p = self.params
        with np.errstate(invalid="ignore"):
            val = (
                math.log(p.a * p.b * p.theta)
                + p.theta * math.log(p.alpha)
                + pc.log_g
                + xlogy_safe(p.theta - 1.0, pc.log_Gbar)
                - (p.theta + 1.0) * pc.log_D
                + xlogy_safe(p.a - 1.0, pc.log_1m_ut)
            )
        return np.where(np.isneginf(pc.log_g), -np.inf, val)

    # -- evaluators ------------------------------------------------------
    def logpdf(self, t):
        pc = self.pieces(t)
        with np.errstate(invalid="ignore"):
            val = self._log_core(pc) + xlogy_safe(self.params.b - 1.0, pc.log_1m_w)
        return _out(np.where(np.isnan(val), -np.inf, val))

    def pdf(self, t):
        return _out(np.exp(self.logpdf(t)))

    def logsf(self, t):
        pc = self.pieces(t)
        return _out(np.minimum(self.params.b * pc.log_1m_w, 0.0))

    def sf(self, t):
        return _out(np.exp(self.logsf(t)))

    def logcdf(self, t):
        return _out(log1mexp(np.asarray(self.logsf(t))))

    def cdf(self, t):
        return _out(np.clip(-np.expm1(np.asarray(self.logsf(t))), 0.0, 1.0) + 0.0)

    def chrf(self, t):
        """Cumulative hazard ``-b log(1 - (1 - u**theta)**a)``."""
        return _out(-np.asarray(self.logsf(t)))

    def hrf(self, t):
        """Hazard rate; ``+inf`` where the survival function is zero."""
        pc = self.pieces(t)
        with np.errstate(invalid="ignore"):
            val = np.exp(self._log_core(pc) - pc.log_1m_w)
        dead = self.params.b * pc.log_1m_w == -np.inf
        val = np.where(dead, np.inf, val)
        return _out(np.where(np.isnan(val), 0.0, val))

    def rhrf(self, t):
        """Reversed hazard rate; ``+inf`` where the cdf is zero."""
        pc = self.pieces(t)
        log_sf = np.minimum(self.params.b * pc.log_1m_w, 0.0)
        log_cdf = log1mexp(log_sf)
        with np.errstate(invalid="ignore"):
            log_f = self._log_core(pc) + xlogy_safe(self.params.b - 1.0, pc.log_1m_w)
            val = np.exp(log_f - log_cdf)
        val = np.where(np.isneginf(log_cdf), np.inf, val)
        return _out(np.where(np.isnan(val), 0.0, val))

    # -- quantiles and sampling -----------------------------------------
    def ppf(self, p):
        """Closed-form quantile; ``p`` must lie strictly inside (0, 1)."""
        p = np.asarray(p, dtype=float)
        if np.any(~((p > 0) & (p < 1))):
            raise ValueError("probability must lie strictly inside (0, 1)")
        return _out(self.ppf_unchecked(p))

    quantile = ppf

    def ppf_unchecked(self, p) -> np.ndarray:
        prm = self.params
        p = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_sf_root = np.log1p(-p) / prm.b  # log (1-p)**(1/b)
            log_y = log1mexp(log_sf_root)  # log(1 - (1-p)**(1/b))
            log_x = log1mexp(log_y / prm.a) / prm.theta  # log u at the quantile
            log_1mx = log1mexp(log_x)
            log_den = np.logaddexp(math.log(prm.alpha) + log_1mx, log_x)
            log_G = math.log(prm.alpha) + log_1mx - log_den
            log_Gbar = log_x - log_den
        G = np.exp(log_G)
        lower = self.baseline.ppf_unchecked(G)
        upper = self.baseline.isf_unchecked(np.exp(log_Gbar))
        return np.where(G <= 0.5, lower, upper)

    def sample(self, n: int, seed: int | None = None) -> np.ndarray:
        """Draw ``n`` values by inversion of a seeded uniform stream."""
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise ValueError("sample size must be a positive integer")
        return self.ppf_unchecked(uniform_stream(int(n), seed))

    # -- convenience ----------------------------------------------------
    def with_params(self, **changes) -> "KwGMODistribution":
        values = {k: getattr(self.params, k) for k in ("a", "b", "alpha", "theta")}
        values.update(changes)
        return KwGMODistribution(self.baseline, FamilyParams(**values))
