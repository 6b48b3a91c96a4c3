"""Baseline lifetime distributions behind a uniform, vectorized interface.

Every baseline exposes its log-density, log-cdf and log-survival functions
computed directly in log space, plus closed-form (or safeguarded numeric)
inverses of the cdf and survival function. Instances are immutable.

Baselines are addressable by a string id, see :func:`make_baseline`:

=================  ==========================  ==========================
id                 class                       free parameters
=================  ==========================  ==========================
``exp``            :class:`Exponential`        ``lam``
``weibull``        :class:`Weibull`            ``lam, beta``
``lomax``          :class:`Lomax`              ``beta, delta``
``frechet``        :class:`Frechet`            ``lam, delta``
``gompertz``       :class:`Gompertz`           ``beta, lam``
``ew:linear``      :class:`ExtendedWeibull`    ``delta``
``ew:square``      :class:`ExtendedWeibull`    ``delta``
``ew:logratio``    :class:`ExtendedWeibull`    ``delta`` (threshold ``k`` fixed)
``ew:gompertz``    :class:`ExtendedWeibull`    ``delta, beta``
``mw``             :class:`ModifiedWeibull`    ``sigma, beta, gamma``
``ep``             :class:`ExponentiatedPareto` ``k, gamma`` (``t_min`` fixed)
=================  ==========================  ==========================
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import ClassVar, Mapping, Sequence

import numpy as np
from scipy import optimize

from ._numeric import log1mexp, log1mexp_scaled, log_neg_log1mexp

__all__ = [
    "BaselineModel",
    "Support",
    "ZFunction",
    "Exponential",
    "Weibull",
    "Lomax",
    "Frechet",
    "Gompertz",
    "ExtendedWeibull",
    "ModifiedWeibull",
    "ExponentiatedPareto",
    "BASELINE_IDS",
    "make_baseline",
]

_EULER_SD = math.pi / math.sqrt(6.0)


@dataclass(frozen=True)
class Support:
    """Interval on which a baseline puts its mass."""

    lower: float
    upper: float
    lower_closed: bool = False
    upper_closed: bool = False

    def contains(self, t):
        t = np.asarray(t, dtype=float)
        above = t >= self.lower if self.lower_closed else t > self.lower
        below = t <= self.upper if self.upper_closed else t < self.upper
        return above & below


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check_prob(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0) & (p < 1))):
        raise ValueError("probability must lie strictly inside (0, 1)")
    return p


@dataclass(frozen=True)
class BaselineModel:
    """Common interface of all baseline distributions.

    Subclasses implement the private ``_log_pdf``, ``_log_cdf``, ``_log_sf``,
    ``_ppf`` and ``_isf`` hooks for points inside the support; the public
    methods add vectorization, support handling and clamping.
    """

    family_id: ClassVar[str] = ""
    param_names: ClassVar[tuple[str, ...]] = ()

    # -- hooks -----------------------------------------------------------
    def _log_pdf(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _log_cdf(self, t: np.ndarray) -> np.ndarray:
        return log1mexp(self._log_sf(t))

    def _log_sf(self, t: np.ndarray) -> np.ndarray:
        return log1mexp(self._log_cdf(t))

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _isf(self, p: np.ndarray) -> np.ndarray:
        return self._ppf(1.0 - p)

    # -- metadata --------------------------------------------------------
    @property
    def support(self) -> Support:
        return Support(0.0, math.inf, lower_closed=True)

    @property
    def id(self) -> str:
        return self.family_id

    @property
    def params(self) -> tuple[float, ...]:
        return tuple(float(getattr(self, name)) for name in self.param_names)

    def params_dict(self) -> dict[str, float]:
        return dict(zip(self.param_names, self.params))

    def with_params(self, values: Sequence[float]) -> "BaselineModel":
        """Return a copy with the free parameters replaced by ``values``."""
        values = [float(v) for v in values]
        if len(values) != len(self.param_names):
            raise ValueError(
                f"{self.id} expects {len(self.param_names)} parameters, got {len(values)}"
            )
        return dataclasses.replace(self, **dict(zip(self.param_names, values)))

    def _validate_positive(self) -> None:
        for name in self.param_names:
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{self.id}: parameter {name} must be positive, got {value}")

    def __post_init__(self) -> None:
        self._validate_positive()

    # -- evaluators ------------------------------------------------------
    def logpdf(self, t):
        t = np.asarray(t, dtype=float)
        inside = self.support.contains(t)
        safe = np.where(inside, t, self._interior_point())
        with np.errstate(all="ignore"):
            val = self._log_pdf(safe)
        val = np.where(inside & ~np.isnan(val), val, -np.inf)
        return _out(val)

    def pdf(self, t):
        return _out(np.exp(self.logpdf(t)))

    def log_components(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(log g, log G, log Gbar)`` in one pass over ``t``."""
        t = np.asarray(t, dtype=float)
        sup = self.support
        inside = sup.contains(t)
        if inside.all():
            with np.errstate(all="ignore"):
                lg, lc, ls = self._log_components(t)
            lg = np.where(np.isnan(lg), -np.inf, lg)
            return lg, np.minimum(lc, 0.0), np.minimum(ls, 0.0)
        return np.asarray(self.logpdf(t)), np.asarray(self.logcdf(t)), np.asarray(self.logsf(t))

    def _log_components(self, t):
        return self._log_pdf(t), self._log_cdf(t), self._log_sf(t)

    def logcdf(self, t):
        t = np.asarray(t, dtype=float)
        sup = self.support
        inside = sup.contains(t)
        safe = np.where(inside, t, self._interior_point())
        with np.errstate(all="ignore"):
            val = np.minimum(self._log_cdf(safe), 0.0)
        val = np.where(inside, val, np.where(t <= sup.lower, -np.inf, 0.0))
        return _out(val)

    def logsf(self, t):
        t = np.asarray(t, dtype=float)
        sup = self.support
        inside = sup.contains(t)
        safe = np.where(inside, t, self._interior_point())
        with np.errstate(all="ignore"):
            val = np.minimum(self._log_sf(safe), 0.0)
        val = np.where(inside, val, np.where(t <= sup.lower, 0.0, -np.inf))
        return _out(val)

    def cdf(self, t):
        return _out(np.exp(self.logcdf(t)))

    def sf(self, t):
        return _out(np.exp(self.logsf(t)))

    def ppf(self, p):
        """Quantile function; ``p`` must lie strictly inside (0, 1)."""
        return _out(self.ppf_unchecked(_check_prob(p)))

    def isf(self, p):
        """Inverse survival function; ``p`` must lie strictly inside (0, 1)."""
        return _out(self.isf_unchecked(_check_prob(p)))

    def ppf_unchecked(self, p) -> np.ndarray:
        """Quantile without domain checks; 0 and 1 map to the support ends."""
        p = np.asarray(p, dtype=float)
        sup = self.support
        mid = np.where((p > 0) & (p < 1), p, 0.5)
        with np.errstate(all="ignore"):
            val = self._ppf(mid)
        return np.where(p <= 0, sup.lower, np.where(p >= 1, sup.upper, val))

    def isf_unchecked(self, p) -> np.ndarray:
        """Inverse survival without domain checks; 1 and 0 map to the ends."""
        p = np.asarray(p, dtype=float)
        sup = self.support
        mid = np.where((p > 0) & (p < 1), p, 0.5)
        with np.errstate(all="ignore"):
            val = self._isf(mid)
        return np.where(p >= 1, sup.lower, np.where(p <= 0, sup.upper, val))

    def _interior_point(self) -> float:
        sup = self.support
        if math.isfinite(sup.upper):
            return 0.5 * (sup.lower + sup.upper)
        return sup.lower + 1.0

    # -- estimation helpers ----------------------------------------------
    def log_parts_grad(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Gradients of ``log g(t)`` and ``log Gbar(t)`` w.r.t. the parameters.

        Returns two arrays of shape ``(n_params, len(t))``. The default uses
        central differences with a relative step; subclasses with simple
        closed forms override it.
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        base = np.array(self.params)
        dlogg = np.empty((base.size, t.size))
        dlogsf = np.empty((base.size, t.size))
        for j, value in enumerate(base):
            h = 1e-6 * max(abs(value), 1e-3)
            up, down = base.copy(), base.copy()
            up[j] += h
            if value - h > 0:
                down[j] -= h
                span = 2 * h
            else:
                span = h
            m_up, m_down = self.with_params(up), self.with_params(down)
            dlogg[j] = (m_up.logpdf(t) - m_down.logpdf(t)) / span
            dlogsf[j] = (m_up.logsf(t) - m_down.logsf(t)) / span
        return dlogg, dlogsf

    @classmethod
    def initial_guess(cls, data, **options) -> "BaselineModel":
        """Rough moment-type parameter values for the given sample."""
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Families with a cumulative hazard form, G = 1 - exp(-H(t)).


@dataclass(frozen=True)
class _HazardForm(BaselineModel):
    def _cumhaz(self, t):
        raise NotImplementedError

    def _log_hazard(self, t):
        raise NotImplementedError

    def _inv_cumhaz(self, y):
        raise NotImplementedError

    def _log_pdf(self, t):
        return self._log_hazard(t) - self._cumhaz(t)

    def _log_sf(self, t):
        return -self._cumhaz(t)

    def _log_cdf(self, t):
        return log1mexp(-self._cumhaz(t))

    def _log_components(self, t):
        H = self._cumhaz(t)
        return self._log_hazard(t) - H, log1mexp(-H), -H

    def _ppf(self, p):
        return self._inv_cumhaz(-np.log1p(-p))

    def _isf(self, p):
        return self._inv_cumhaz(-np.log(p))


@dataclass(frozen=True)
class Exponential(_HazardForm):
    """Exponential distribution with rate ``lam``."""

    lam: float = 1.0
    family_id: ClassVar[str] = "exp"
    param_names: ClassVar[tuple[str, ...]] = ("lam",)

    def _cumhaz(self, t):
        return self.lam * t

    def _log_hazard(self, t):
        return np.full_like(t, math.log(self.lam))

    def _inv_cumhaz(self, y):
        return y / self.lam

    def log_parts_grad(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return (1.0 / self.lam - t)[None, :], (-t)[None, :]

    @classmethod
    def initial_guess(cls, data, **options):
        return cls(lam=1.0 / float(np.mean(data)))


@dataclass(frozen=True)
class Weibull(_HazardForm):
    """Weibull distribution with ``G(t) = 1 - exp(-lam * t**beta)``."""

    lam: float = 1.0
    beta: float = 1.0
    family_id: ClassVar[str] = "weibull"
    param_names: ClassVar[tuple[str, ...]] = ("lam", "beta")

    def _cumhaz(self, t):
        return self.lam * t**self.beta

    def _log_hazard(self, t):
        return math.log(self.lam * self.beta) + (self.beta - 1.0) * np.log(t)

    def _inv_cumhaz(self, y):
        return (y / self.lam) ** (1.0 / self.beta)

    def log_parts_grad(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        tb = t**self.beta
        logt = np.log(t)
        d_lam_g = 1.0 / self.lam - tb
        d_lam_s = -tb
        d_beta_s = -self.lam * tb * logt
        d_beta_g = 1.0 / self.beta + logt + d_beta_s
        return np.vstack([d_lam_g, d_beta_g]), np.vstack([d_lam_s, d_beta_s])

    @classmethod
    def initial_guess(cls, data, **options):
        data = np.asarray(data, dtype=float)
        sd = float(np.std(np.log(data)))
        beta = _EULER_SD / sd if sd > 0 else 1.0
        lam = math.log(2.0) / float(np.median(data)) ** beta
        return cls(lam=lam, beta=beta)


@dataclass(frozen=True)
class Gompertz(_HazardForm):
    """Gompertz distribution with hazard ``beta * exp(lam * t)``."""

    beta: float = 1.0
    lam: float = 1.0
    family_id: ClassVar[str] = "gompertz"
    param_names: ClassVar[tuple[str, ...]] = ("beta", "lam")

    def _cumhaz(self, t):
        return self.beta / self.lam * np.expm1(self.lam * t)

    def _log_hazard(self, t):
        return math.log(self.beta) + self.lam * t

    def _inv_cumhaz(self, y):
        return np.log1p(self.lam * y / self.beta) / self.lam

    @classmethod
    def initial_guess(cls, data, **options):
        mean = float(np.mean(data))
        return cls(beta=0.5 / mean, lam=1.0 / mean)


_Z_KINDS = ("linear", "square", "logratio", "gompertz")


@dataclass(frozen=True)
class ZFunction:
    """Monotone transform ``Z`` of the extended Weibull family.

    Attributes:
        kind: one of ``linear`` (Z = t), ``square`` (Z = t**2),
            ``logratio`` (Z = log(t / k), support t > k) or ``gompertz``
            (Z = (exp(beta t) - 1) / beta).
        k: fixed threshold of the ``logratio`` kind.
        beta: rate of the ``gompertz`` kind; a free parameter.
    """

    kind: str = "linear"
    k: float = 1.0
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _Z_KINDS:
            raise ValueError(f"unknown Z-function kind {self.kind!r}; expected one of {_Z_KINDS}")
        if self.kind == "logratio" and not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("logratio threshold k must be positive")
        if self.kind == "gompertz":
            if self.beta is None:
                object.__setattr__(self, "beta", 1.0)
            if not (math.isfinite(self.beta) and self.beta > 0):
                raise ValueError("gompertz Z-function rate beta must be positive")

    @property
    def free_names(self) -> tuple[str, ...]:
        return ("beta",) if self.kind == "gompertz" else ()

    @property
    def lower(self) -> float:
        return self.k if self.kind == "logratio" else 0.0

    def Z(self, t):
        if self.kind == "linear":
            return t
        if self.kind == "square":
            return t * t
        if self.kind == "logratio":
            return np.log(t / self.k)
        return np.expm1(self.beta * t) / self.beta

    def log_z(self, t):
        if self.kind == "linear":
            return np.zeros_like(t)
        if self.kind == "square":
            return math.log(2.0) + np.log(t)
        if self.kind == "logratio":
            return -np.log(t)
        return self.beta * t

    def inverse(self, y):
        if self.kind == "linear":
            return y
        if self.kind == "square":
            return np.sqrt(y)
        if self.kind == "logratio":
            return self.k * np.exp(y)
        return np.log1p(self.beta * y) / self.beta


@dataclass(frozen=True)
class ExtendedWeibull(_HazardForm):
    """Extended Weibull family ``G(t) = 1 - exp(-delta * Z(t))``."""

    delta: float = 1.0
    zfunc: ZFunction = ZFunction()
    family_id: ClassVar[str] = "ew"

    @property
    def param_names(self) -> tuple[str, ...]:  # type: ignore[override]
        return ("delta",) + self.zfunc.free_names

    @property
    def id(self) -> str:
        return f"ew:{self.zfunc.kind}"

    @property
    def params(self) -> tuple[float, ...]:
        extra = (float(self.zfunc.beta),) if self.zfunc.kind == "gompertz" else ()
        return (float(self.delta),) + extra

    def with_params(self, values):
        values = [float(v) for v in values]
        if len(values) != len(self.param_names):
            raise ValueError(f"{self.id} expects {len(self.param_names)} parameters")
        zfunc = self.zfunc
        if zfunc.kind == "gompertz":
            zfunc = dataclasses.replace(zfunc, beta=values[1])
        return dataclasses.replace(self, delta=values[0], zfunc=zfunc)

    def _validate_positive(self) -> None:
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"{self.id}: parameter delta must be positive, got {self.delta}")

    @property
    def support(self) -> Support:
        lower = self.zfunc.lower
        return Support(lower, math.inf, lower_closed=lower == 0.0)

    def _cumhaz(self, t):
        return self.delta * self.zfunc.Z(t)

    def _log_hazard(self, t):
        return math.log(self.delta) + self.zfunc.log_z(t)

    def _inv_cumhaz(self, y):
        return self.zfunc.inverse(y / self.delta)

    @classmethod
    def initial_guess(cls, data, *, zfunc: ZFunction | None = None, **options):
        zfunc = zfunc or ZFunction()
        data = np.asarray(data, dtype=float)
        if zfunc.kind == "gompertz":
            zfunc = dataclasses.replace(zfunc, beta=1.0 / float(np.mean(data)))
        mean_z = float(np.mean(zfunc.Z(data)))
        return cls(delta=1.0 / mean_z if mean_z > 0 else 1.0, zfunc=zfunc)


@dataclass(frozen=True)
class ModifiedWeibull(_HazardForm):
    """Modified Weibull with cumulative hazard ``sigma*t + beta*t**gamma``.

    ``sigma`` and ``beta`` may be zero individually but not both.
    """

    sigma: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    family_id: ClassVar[str] = "mw"
    param_names: ClassVar[tuple[str, ...]] = ("sigma", "beta", "gamma")

    def _validate_positive(self) -> None:
        s, b, g = float(self.sigma), float(self.beta), float(self.gamma)
        if not all(math.isfinite(v) for v in (s, b, g)):
            raise ValueError("mw: parameters must be finite")
        if s < 0 or b < 0 or s + b <= 0:
            raise ValueError("mw: need sigma >= 0, beta >= 0 and sigma + beta > 0")
        if g <= 0:
            raise ValueError("mw: gamma must be positive")

    def _cumhaz(self, t):
        return self.sigma * t + self.beta * t**self.gamma

    def _log_hazard(self, t):
        return np.log(self.sigma + self.beta * self.gamma * t ** (self.gamma - 1.0))

    def _inv_cumhaz(self, y):
        y = np.asarray(y, dtype=float)
        if self.beta == 0:
            return y / self.sigma
        if self.sigma == 0:
            return (y / self.beta) ** (1.0 / self.gamma)
        return np.vectorize(self._solve_cumhaz, otypes=[float])(y)

    def _solve_cumhaz(self, y: float) -> float:
        if y <= 0:
            return 0.0
        if not math.isfinite(y):
            return math.inf

        def resid(t: float) -> float:
            return self.sigma * t + self.beta * t**self.gamma - y

        # Each term alone bounds the root from above; grow if round-off bites.
        hi = min(y / self.sigma, (y / self.beta) ** (1.0 / self.gamma))
        while resid(hi) < 0:
            hi *= 2.0
        return optimize.brentq(resid, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)

    @classmethod
    def initial_guess(cls, data, **options):
        mean = float(np.mean(data))
        gamma = 1.5
        return cls(sigma=0.5 / mean, beta=0.5 / mean**gamma, gamma=gamma)


# ---------------------------------------------------------------------------
# Families written through G or Gbar directly.


@dataclass(frozen=True)
class Lomax(BaselineModel):
    """Lomax (Pareto II) with ``Gbar(t) = (1 + t/delta)**(-beta)``."""

    beta: float = 1.0
    delta: float = 1.0
    family_id: ClassVar[str] = "lomax"
    param_names: ClassVar[tuple[str, ...]] = ("beta", "delta")

    def _log_sf(self, t):
        return -self.beta * np.log1p(t / self.delta)

    def _log_pdf(self, t):
        return math.log(self.beta / self.delta) - (self.beta + 1.0) * np.log1p(t / self.delta)

    def _ppf(self, p):
        return self.delta * np.expm1(-np.log1p(-p) / self.beta)

    def _isf(self, p):
        return self.delta * np.expm1(-np.log(p) / self.beta)

    @classmethod
    def initial_guess(cls, data, **options):
        mean = float(np.mean(data))
        return cls(beta=3.0, delta=2.0 * mean)


@dataclass(frozen=True)
class Frechet(BaselineModel):
    """Frechet distribution with ``G(t) = exp(-(delta/t)**lam)``."""

    lam: float = 1.0
    delta: float = 1.0
    family_id: ClassVar[str] = "frechet"
    param_names: ClassVar[tuple[str, ...]] = ("lam", "delta")

    @property
    def support(self) -> Support:
        return Support(0.0, math.inf)

    def _log_cdf(self, t):
        return -((self.delta / t) ** self.lam)

    def _log_sf(self, t):
        # Far in the tail the cdf rounds to 1; work from log((delta/t)**lam).
        log_x = self.lam * (math.log(self.delta) - np.log(t))
        return log1mexp_scaled(1.0, -np.exp(log_x), log_x)

    def _log_pdf(self, t):
        return (
            math.log(self.lam)
            + self.lam * math.log(self.delta)
            - (self.lam + 1.0) * np.log(t)
            + self._log_cdf(t)
        )

    def _ppf(self, p):
        return self.delta * (-np.log(p)) ** (-1.0 / self.lam)

    def _isf(self, p):
        return self.delta * (-np.log1p(-p)) ** (-1.0 / self.lam)

    @classmethod
    def initial_guess(cls, data, **options):
        data = np.asarray(data, dtype=float)
        sd = float(np.std(np.log(data)))
        lam = _EULER_SD / sd if sd > 0 else 1.0
        delta = float(np.median(data)) * math.log(2.0) ** (1.0 / lam)
        return cls(lam=lam, delta=delta)


@dataclass(frozen=True)
class ExponentiatedPareto(BaselineModel):
    """Exponentiated Pareto with ``G(t) = (1 - (t_min/t)**k)**gamma``.

    The threshold ``t_min`` is a fixed constant, not a free parameter.
    """

    k: float = 1.0
    gamma: float = 1.0
    t_min: float = 1.0
    family_id: ClassVar[str] = "ep"
    param_names: ClassVar[tuple[str, ...]] = ("k", "gamma")

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (math.isfinite(self.t_min) and self.t_min > 0):
            raise ValueError("ep: threshold t_min must be positive")

    @property
    def support(self) -> Support:
        return Support(self.t_min, math.inf)

    def _log_cdf(self, t):
        return self.gamma * np.log1p(-((self.t_min / t) ** self.k))

    def _log_sf(self, t):
        log_y = self.k * (math.log(self.t_min) - np.log(t))
        return log1mexp_scaled(self.gamma, log1mexp(log_y), log_neg_log1mexp(log_y))

    def _log_pdf(self, t):
        return (
            math.log(self.gamma * self.k)
            + self.k * math.log(self.t_min)
            - (self.k + 1.0) * np.log(t)
            + (self.gamma - 1.0) * np.log1p(-((self.t_min / t) ** self.k))
        )

    def _ppf(self, p):
        return self.t_min * (-np.expm1(np.log(p) / self.gamma)) ** (-1.0 / self.k)

    def _isf(self, p):
        return self.t_min * (-np.expm1(np.log1p(-p) / self.gamma)) ** (-1.0 / self.k)

    @classmethod
    def initial_guess(cls, data, *, t_min: float = 1.0, **options):
        data = np.asarray(data, dtype=float)
        mean_log = float(np.mean(np.log(data / t_min)))
        return cls(k=1.0 / mean_log if mean_log > 0 else 1.0, gamma=1.0, t_min=t_min)


# ---------------------------------------------------------------------------

_SIMPLE = {
    "exp": Exponential,
    "weibull": Weibull,
    "lomax": Lomax,
    "frechet": Frechet,
    "gompertz": Gompertz,
    "mw": ModifiedWeibull,
    "ep": ExponentiatedPareto,
}

BASELINE_IDS: tuple[str, ...] = (
    "exp", "weibull", "lomax", "frechet", "gompertz",
    "ew:linear", "ew:square", "ew:logratio", "ew:gompertz",
    "mw", "ep",
)


def baseline_class(baseline_id: str) -> type[BaselineModel]:
    if baseline_id.startswith("ew:"):
        return ExtendedWeibull
    try:
        return _SIMPLE[baseline_id]
    except KeyError:
        raise ValueError(
            f"unknown baseline {baseline_id!r}; expected one of {', '.join(BASELINE_IDS)}"
        ) from None


def baseline_free_names(baseline_id: str) -> tuple[str, ...]:
    """Names of the free parameters of a baseline id, in order."""
    if baseline_id.startswith("ew:"):
        return ("delta", "beta") if baseline_id == "ew:gompertz" else ("delta",)
    return baseline_class(baseline_id).param_names


def baseline_options(baseline_id: str) -> tuple[str, ...]:
    """Names of fixed (non-fitted) constants a baseline id accepts."""
    if baseline_id == "ep":
        return ("t_min",)
    if baseline_id == "ew:logratio":
        return ("k",)
    return ()


def make_baseline(
    baseline_id: str,
    params: Sequence[float] | Mapping[str, float] | None = None,
    **options: float,
) -> BaselineModel:
    """Build a baseline from its string id.

    Args:
        baseline_id: one of :data:`BASELINE_IDS`.
        params: free parameter values, positional or by name. ``None`` gives
            the class defaults.
        **options: fixed constants, ``t_min`` for ``ep`` and ``k`` for
            ``ew:logratio``.
    """
    cls = baseline_class(baseline_id)
    allowed = baseline_options(baseline_id)
    for key in options:
        if key not in allowed:
            raise ValueError(f"baseline {baseline_id!r} does not accept option {key!r}")
    names = baseline_free_names(baseline_id)
    if params is None:
        values: dict[str, float] = {}
    elif isinstance(params, Mapping):
        unknown = set(params) - set(names)
        if unknown:
            raise ValueError(f"unknown parameters for {baseline_id}: {sorted(unknown)}")
        values = {k: float(v) for k, v in params.items()}
    else:
        params = list(params)
        if len(params) != len(names):
            raise ValueError(f"{baseline_id} expects {len(names)} parameters {names}, got {len(params)}")
        values = dict(zip(names, (float(v) for v in params)))

    if cls is ExtendedWeibull:
        kind = baseline_id.split(":", 1)[1]
        zfunc = ZFunction(kind, k=float(options.get("k", 1.0)), beta=values.get("beta"))
        return ExtendedWeibull(delta=values.get("delta", 1.0), zfunc=zfunc)
    return cls(**values, **{k: float(v) for k, v in options.items()})


def initial_baseline(baseline_id: str, data, **options: float) -> BaselineModel:
    """Moment-type starting values for a baseline id on ``data``."""
    cls = baseline_class(baseline_id)
    if cls is ExtendedWeibull:
        template = make_baseline(baseline_id, **options)
        return ExtendedWeibull.initial_guess(data, zfunc=template.zfunc)
    return cls.initial_guess(data, **options)
