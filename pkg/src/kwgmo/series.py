"""Series expansions, moments, entropy and tail/origin asymptotes.

The composed density is a weighted sum of GMO building blocks, so moments,
the mgf and the Renyi entropy can be assembled from integrals of the GMO
sub-model. Every such quantity also has a direct quadrature evaluator that
serves as its reference.

Expansion coefficients use generalized binomial coefficients. For integer
shape parameters the sums terminate and are exact; otherwise they are
truncated at a user-set order and flagged as approximate, together with an
estimate of the dropped remainder (the largest magnitude of the last kept
term over a grid of quantiles).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.special import binom, gammaln

from ._numeric import (
    DivergenceError,
    IntegrationError,
    integrate_over_quantiles,
    log1mexp,
    log1mexp_scaled,
    log_neg_log1mexp,
    xlogy_safe,
)
from .baseline import BaselineModel
from .family import FamilyParams, KwGMODistribution

__all__ = [
    "SeriesCoefficients",
    "PdfExpansion",
    "SfExpansion",
    "OrderStatExpansion",
    "SeriesApproximationWarning",
    "DivergenceError",
    "IntegrationError",
    "expand_pdf",
    "expand_sf",
    "order_stat_pdf",
    "order_stat_expansion",
    "order_stat_moment",
    "pwm_gmo",
    "moment",
    "mgf",
    "renyi_entropy",
    "renyi_coefficients",
    "asymptote_origin",
    "asymptote_tail",
    "Asymptote",
]

DEFAULT_TRUNCATION = 40
RESIDUAL_TOLERANCE = 1e-8
_GRID_PROBS = np.linspace(0.01, 0.99, 99)


class SeriesApproximationWarning(UserWarning):
    """A truncated series left a remainder above tolerance."""


def _is_whole(x: float) -> bool:
    return x >= 0 and abs(x - round(x)) < 1e-12


@dataclass(frozen=True)
class SeriesCoefficients:
    """A truncated coefficient sequence with its truncation metadata.

    Attributes:
        kind: ``PdfA``, ``PdfB``, ``SfC``, ``SfDelta``, ``OrderEta`` or ``RenyiZ``.
        values: coefficients indexed from zero.
        exponents: power attached to each coefficient.
        truncation_order: highest index kept.
        truncation_residual: largest last-term magnitude over a quantile grid,
            zero when the series terminates exactly.
        approximate: true when the underlying sum is infinite.
    """

    kind: str
    values: np.ndarray
    exponents: np.ndarray
    truncation_order: int
    truncation_residual: float
    approximate: bool

    @property
    def exceeds_tolerance(self) -> bool:
        return self.approximate and self.truncation_residual > RESIDUAL_TOLERANCE

    def __len__(self) -> int:
        return len(self.values)


def _gmo(dist: KwGMODistribution, theta: float | None = None) -> KwGMODistribution:
    p = dist.params
    return KwGMODistribution(dist.baseline, FamilyParams(1.0, 1.0, p.alpha, p.theta if theta is None else theta))


def _gmo_logs(dist: KwGMODistribution, t):
    """Log cdf, log sf and log pdf of the GMO sub-model."""
    gmo = _gmo(dist)
    pc = gmo.pieces(t)
    log_sf = dist.params.theta * pc.log_u
    return np.asarray(pc.log_1m_ut), np.asarray(log_sf), np.asarray(gmo.logpdf(t))


def _grid(dist: KwGMODistribution) -> np.ndarray:
    return np.asarray(dist.ppf(_GRID_PROBS))


def _power_sum(coef: np.ndarray, exps: np.ndarray, log_base: np.ndarray) -> np.ndarray:
    """``sum_k coef[k] * exp(exps[k] * log_base)`` over a vector of points."""
    terms = np.exp(xlogy_safe(exps[:, None], log_base[None, :]))
    return coef @ terms


# ---------------------------------------------------------------------------
# Density and survival expansions


@dataclass(frozen=True)
class PdfExpansion:
    """Two rearrangements of the density as GMO-based sums.

    ``A`` multiplies powers of the GMO cdf, ``B`` multiplies powers of the
    GMO survival function. The B-form is equivalently a mixture of GMO
    densities with powers ``theta * (k + 1)`` and weights ``B_k / (k + 1)``.
    """

    dist: KwGMODistribution
    A: SeriesCoefficients
    B: SeriesCoefficients

    def pdf_a_form(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        log_cdf, _, log_f = _gmo_logs(self.dist, t)
        return np.exp(log_f) * _power_sum(self.A.values, self.A.exponents, log_cdf)

    def pdf_b_form(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        _, log_sf, log_f = _gmo_logs(self.dist, t)
        return np.exp(log_f) * _power_sum(self.B.values, self.B.exponents, log_sf)

    @property
    def mixture_weights(self) -> np.ndarray:
        return self.B.values / (np.arange(len(self.B)) + 1.0)

    @property
    def mixture_thetas(self) -> np.ndarray:
        return self.dist.params.theta * (np.arange(len(self.B)) + 1.0)

    def pdf_mixture(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        total = np.zeros_like(t)
        for w, th in zip(self.mixture_weights, self.mixture_thetas):
            total += w * np.asarray(_gmo(self.dist, th).pdf(t))
        return total


def expand_pdf(dist: KwGMODistribution, truncation: int = DEFAULT_TRUNCATION) -> PdfExpansion:
    """Expand the density in powers of the GMO cdf and survival function.

    Args:
        dist: the composed distribution.
        truncation: highest index kept for sums that do not terminate.

    Raises:
        ValueError: if ``truncation < 1``.
    """
    if truncation < 1:
        raise ValueError("truncation order must be at least 1")
    a, b = dist.params.a, dist.params.b
    b_whole = _is_whole(b)
    n_a = int(round(b)) if b_whole else truncation + 1
    j = np.arange(n_a, dtype=float)
    A = a * b * (-1.0) ** j * binom(b - 1.0, j)
    a_exps = a * (j + 1.0) - 1.0

    # B_k = sum_j A_j (-1)^k C(a(j+1)-1, k); each inner sum stops at a(j+1)-1 when whole.
    inner_whole = np.array([_is_whole(c) for c in a_exps])
    k_max = int(max(round(c) if w else truncation for c, w in zip(a_exps, inner_whole)))
    k = np.arange(k_max + 1, dtype=float)
    B = np.zeros(k_max + 1)
    for A_j, c in zip(A, a_exps):
        B += A_j * (-1.0) ** k * binom(c, k)
    approx_b = (not b_whole) or (not inner_whole.all())

    grid = _grid(dist)
    log_cdf, log_sf, log_f = _gmo_logs(dist, grid)
    res_a = 0.0
    if not b_whole:
        res_a = float(np.max(np.abs(A[-1]) * np.exp(xlogy_safe(a_exps[-1], log_cdf) + log_f)))
    res_b = 0.0
    if approx_b:
        res_b = float(np.max(np.abs(B[-1]) * np.exp(xlogy_safe(float(k_max), log_sf) + log_f)))

    coef_a = SeriesCoefficients("PdfA", A, a_exps, n_a - 1, res_a, not b_whole)
    coef_b = SeriesCoefficients("PdfB", B, k, k_max, res_b, approx_b)
    return PdfExpansion(dist, coef_a, coef_b)


@dataclass(frozen=True)
class SfExpansion:
    """Survival function as powers of the GMO cdf (C) or GMO sf (delta)."""

    dist: KwGMODistribution
    C: SeriesCoefficients
    delta: SeriesCoefficients

    def sf_c_form(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        log_cdf, _, _ = _gmo_logs(self.dist, t)
        return _power_sum(self.C.values, self.C.exponents, log_cdf)

    def sf_delta_form(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        _, log_sf, _ = _gmo_logs(self.dist, t)
        return _power_sum(self.delta.values, self.delta.exponents, log_sf)


def expand_sf(dist: KwGMODistribution, truncation: int = DEFAULT_TRUNCATION) -> SfExpansion:
    """Expand the survival function in powers of the GMO cdf and sf.

    The delta-form collects every ``(l, m)`` pair with ``m <= a l`` into a
    single sum over ``m``.
    """
    if truncation < 1:
        raise ValueError("truncation order must be at least 1")
    a, b = dist.params.a, dist.params.b
    b_whole = _is_whole(b)
    n_c = int(round(b)) + 1 if b_whole else truncation + 1
    l = np.arange(n_c, dtype=float)
    C = (-1.0) ** l * binom(b, l)
    c_exps = a * l

    inner_whole = np.array([_is_whole(e) for e in c_exps])
    m_max = int(max(round(e) if w else truncation for e, w in zip(c_exps, inner_whole)))
    m = np.arange(m_max + 1, dtype=float)
    delta = np.zeros(m_max + 1)
    for C_l, e in zip(C, c_exps):
        delta += C_l * (-1.0) ** m * binom(e, m)
    approx_d = (not b_whole) or (not inner_whole.all())

    grid = _grid(dist)
    log_cdf, log_sf, _ = _gmo_logs(dist, grid)
    res_c = 0.0 if b_whole else float(np.max(np.abs(C[-1]) * np.exp(xlogy_safe(c_exps[-1], log_cdf))))
    res_d = 0.0 if not approx_d else float(np.max(np.abs(delta[-1]) * np.exp(xlogy_safe(float(m_max), log_sf))))

    return SfExpansion(
        dist,
        SeriesCoefficients("SfC", C, c_exps, n_c - 1, res_c, not b_whole),
        SeriesCoefficients("SfDelta", delta, m, m_max, res_d, approx_d),
    )


# ---------------------------------------------------------------------------
# Order statistics


def _check_rank(i: int, n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError("sample size n must be a positive integer")
    if int(i) != i or not 1 <= i <= n:
        raise IndexError(f"rank i={i} must satisfy 1 <= i <= n={n}")


def _log_rank_const(i: int, n: int) -> float:
    return float(gammaln(n + 1) - gammaln(i) - gammaln(n - i + 1))


def order_stat_pdf(dist: KwGMODistribution, i: int, n: int, t):
    """Density of the ``i``-th smallest of ``n`` independent draws."""
    _check_rank(i, n)
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore"):
        val = (
            _log_rank_const(i, n)
            + np.asarray(dist.logpdf(t))
            + xlogy_safe(i - 1, dist.logcdf(t))
            + xlogy_safe(n - i, dist.logsf(t))
        )
    val = np.where(np.isnan(val), -np.inf, val)
    out = np.exp(val)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class OrderStatExpansion:
    """Order-statistic density as ``f_GMO * sum_p eta_p * Fbar_GMO**p``.

    The constant ``n! / ((i-1)! (n-i)!)`` is folded into ``eta``.
    """

    dist: KwGMODistribution
    i: int
    n: int
    eta: SeriesCoefficients

    exact: tuple[int, ...] = ()

    def pdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        _, log_sf, log_f = _gmo_logs(self.dist, t)
        # Exact rational Horner: the alternating integer coefficients cancel badly in floats.
        poly = [float(_horner_exact(self.exact, x)) for x in np.exp(log_sf)]
        return np.exp(log_f) * np.array(poly)

    def moment(self, s: float) -> float:
        """``E[T_{i:n}**s]`` as an eta-weighted sum of GMO PWMs."""
        p = self.dist.params
        total = 0.0
        for eta_p, power in zip(self.eta.values, self.eta.exponents):
            if eta_p == 0.0:
                continue
            total += eta_p * pwm_gmo(self.dist.baseline, p.alpha, p.theta, s, 0, float(power))
        return total


def order_stat_expansion(dist: KwGMODistribution, i: int, n: int) -> OrderStatExpansion:
    """Exact polynomial expansion of the order-statistic density.

    Requires whole-number ``a`` and ``b`` so that every sum terminates. The
    power ``(n + k - i)`` of the survival polynomial is expanded exactly and
    all terms are collected by their total power of the GMO survival
    function.
    """
    _check_rank(i, n)
    a, b = dist.params.a, dist.params.b
    if not (_is_whole(a) and _is_whole(b)):
        raise ValueError("order-statistic series requires whole-number a and b")
    # With whole a and b every coefficient is an integer, so work exactly.
    B = [int(round(v)) for v in expand_pdf(dist).B.values]
    delta = [int(round(v)) for v in expand_sf(dist).delta.values]
    acc: list[int] = [0]
    for k in range(i):
        term = [(-1) ** k * math.comb(i - 1, k) * c for c in _int_polypow(delta, n + k - i)]
        acc = _int_polyadd(acc, term)
    const = math.factorial(n) // (math.factorial(i - 1) * math.factorial(n - i))
    eta = [const * c for c in _int_polymul(B, acc)]
    while len(eta) > 1 and eta[-1] == 0:
        eta.pop()
    values = np.array([float(c) for c in eta])
    coef = SeriesCoefficients("OrderEta", values, np.arange(len(eta), dtype=float), len(eta) - 1, 0.0, False)
    return OrderStatExpansion(dist, int(i), int(n), coef, tuple(eta))


def _int_polymul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def _int_polyadd(p: list[int], q: list[int]) -> list[int]:
    if len(p) < len(q):
        p, q = q, p
    return [x + (q[i] if i < len(q) else 0) for i, x in enumerate(p)]


def _int_polypow(p: list[int], power: int) -> list[int]:
    out = [1]
    for _ in range(power):
        out = _int_polymul(out, p)
    return out


def _horner_exact(coefs: tuple[int, ...], x: float) -> Fraction:
    xf = Fraction(x)
    acc = Fraction(0)
    for c in reversed(coefs):
        acc = acc * xf + c
    return acc


def order_stat_moment(dist: KwGMODistribution, i: int, n: int, s: float, method: str = "quadrature") -> float:
    """``E[T_{i:n}**s]`` by direct quadrature or by the eta series."""
    _check_rank(i, n)
    if method == "series":
        return order_stat_expansion(dist, i, n).moment(s)
    _check_method(method)
    return _integrate(dist, lambda t: t**s * order_stat_pdf(dist, i, n, t))


# ---------------------------------------------------------------------------
# Integrals


def _check_method(method: str) -> None:
    if method not in ("series", "quadrature"):
        raise ValueError(f"method must be 'series' or 'quadrature', got {method!r}")


def _integrate(dist: KwGMODistribution, func) -> float:
    sup = dist.support
    return integrate_over_quantiles(
        func, lambda p: float(dist.ppf_unchecked(p)), lower=sup.lower, upper=sup.upper
    )


def _log_power(t: float, s: float) -> float:
    if s == 0:
        return 0.0
    return s * math.log(t) if t > 0 else (-math.inf if s > 0 else math.inf)


def _pwm_integral(gmo: KwGMODistribution, p: float, q: float, r: float, *, tilt: float = 0.0, power: float = 1.0) -> float:
    """``int t^p F^q Fbar^r f^power exp(tilt t) dt`` for a GMO model."""
    theta = gmo.params.theta

    def integrand(t: float) -> float:
        pc = gmo.pieces(t)
        log_sf = theta * float(pc.log_u)
        log_cdf = float(pc.log_1m_ut)
        log_f = float(gmo.logpdf(t))
        val = (
            _log_power(t, p)
            + float(xlogy_safe(q, log_cdf))
            + float(xlogy_safe(r, log_sf))
            + float(xlogy_safe(power, log_f))
            + tilt * t
        )
        if math.isnan(val):
            return 0.0
        return math.exp(min(val, 700.0))

    return _integrate(gmo, integrand)


def pwm_gmo(baseline: BaselineModel, alpha: float, theta: float, p: float, q: float, r: float) -> float:
    """Probability weighted moment of the GMO sub-model by quadrature.

    Computes ``int t^p F(t)^q (1 - F(t))^r f(t) dt`` with ``F`` and ``f`` the
    GMO cdf and density.

    Raises:
        DivergenceError: if the integral diverges in the upper tail.
    """
    gmo = KwGMODistribution(baseline, FamilyParams(1.0, 1.0, alpha, theta))
    return _pwm_integral(gmo, p, q, r)


def _warn_if_loose(coef: SeriesCoefficients) -> None:
    if coef.exceeds_tolerance:
        warnings.warn(
            f"{coef.kind} series truncated at order {coef.truncation_order} "
            f"with remainder estimate {coef.truncation_residual:.3g}",
            SeriesApproximationWarning,
            stacklevel=3,
        )


def moment(
    dist: KwGMODistribution,
    s: float,
    method: str = "quadrature",
    *,
    form: str = "A",
    truncation: int = DEFAULT_TRUNCATION,
) -> float:
    """Raw moment ``E[T**s]``.

    Args:
        dist: the composed distribution.
        s: nonnegative order.
        method: ``quadrature`` integrates ``t**s * pdf``; ``series`` sums GMO
            PWMs weighted by the A (cdf-power) or B (sf-power) coefficients.
        form: ``A`` or ``B``, used by the series method.
        truncation: series truncation order.

    Raises:
        DivergenceError: if the moment does not exist.
    """
    _check_method(method)
    if s < 0:
        raise ValueError("moment order must be nonnegative")
    if s == 0:
        return 1.0
    if method == "quadrature":
        def integrand(t: float) -> float:
            val = _log_power(t, s) + float(dist.logpdf(t))
            return 0.0 if math.isnan(val) else math.exp(min(val, 700.0))
        return _integrate(dist, integrand)

    exp_ = expand_pdf(dist, truncation)
    gmo = _gmo(dist)
    if form == "A":
        _warn_if_loose(exp_.A)
        return float(sum(
            A_j * _pwm_integral(gmo, s, c, 0.0) for A_j, c in zip(exp_.A.values, exp_.A.exponents) if A_j != 0
        ))
    if form == "B":
        _warn_if_loose(exp_.B)
        return float(sum(
            B_k * _pwm_integral(gmo, s, 0.0, k) for B_k, k in zip(exp_.B.values, exp_.B.exponents) if B_k != 0
        ))
    raise ValueError("form must be 'A' or 'B'")


def mgf(dist: KwGMODistribution, s: float, method: str = "quadrature", *, truncation: int = DEFAULT_TRUNCATION) -> float:
    """Moment generating function ``E[exp(s T)]``.

    The series method weights GMO mgfs with powers ``theta * (k + 1)`` by
    ``B_k / (k + 1)``.

    Raises:
        DivergenceError: if ``s`` is beyond the tail decay rate.
    """
    _check_method(method)
    if s == 0:
        return 1.0
    if method == "quadrature":
        def integrand(t: float) -> float:
            val = s * t + float(dist.logpdf(t))
            return 0.0 if math.isnan(val) else math.exp(min(val, 700.0))
        return _integrate(dist, integrand)

    exp_ = expand_pdf(dist, truncation)
    _warn_if_loose(exp_.B)
    total = 0.0
    for w, th in zip(exp_.mixture_weights, exp_.mixture_thetas):
        if w != 0:
            total += w * _pwm_integral(_gmo(dist, th), 0.0, 0.0, 0.0, tilt=s)
    return float(total)


def renyi_coefficients(dist: KwGMODistribution, delta: float, truncation: int = DEFAULT_TRUNCATION) -> SeriesCoefficients:
    """Coefficients ``Z_i`` of ``f**delta`` in powers of the GMO cdf.

    ``f**delta = f_GMO**delta * sum_i Z_i F_GMO**(delta (a-1) + a i)``.
    """
    a, b = dist.params.a, dist.params.b
    top = delta * (b - 1.0)
    whole = _is_whole(top)
    n_terms = int(round(top)) + 1 if whole else truncation + 1
    i = np.arange(n_terms, dtype=float)
    Z = (a * b) ** delta * (-1.0) ** i * binom(top, i)
    exps = delta * (a - 1.0) + a * i
    residual = 0.0
    if not whole:
        grid = _grid(dist)
        log_cdf, _, log_f = _gmo_logs(dist, grid)
        residual = float(np.max(np.abs(Z[-1]) * np.exp(xlogy_safe(exps[-1], log_cdf) + delta * log_f)))
    return SeriesCoefficients("RenyiZ", Z, exps, n_terms - 1, residual, not whole)


def renyi_entropy(
    dist: KwGMODistribution,
    delta: float,
    method: str = "quadrature",
    *,
    truncation: int = DEFAULT_TRUNCATION,
) -> float:
    """Renyi entropy ``log(int f**delta) / (1 - delta)``.

    Raises:
        ValueError: if ``delta <= 0`` or ``delta == 1``.
        DivergenceError: if the integral diverges.
    """
    _check_method(method)
    if not (delta > 0) or delta == 1:
        raise ValueError("Renyi order must be positive and different from 1")
    if method == "quadrature":
        def integrand(t: float) -> float:
            val = delta * float(dist.logpdf(t))
            return 0.0 if math.isnan(val) else math.exp(min(val, 700.0))
        integral = _integrate(dist, integrand)
    else:
        coef = renyi_coefficients(dist, delta, truncation)
        _warn_if_loose(coef)
        gmo = _gmo(dist)
        integral = float(sum(
            Z_i * _pwm_integral(gmo, 0.0, e, 0.0, power=delta)
            for Z_i, e in zip(coef.values, coef.exponents) if Z_i != 0
        ))
    if not integral > 0:
        raise IntegrationError("integral of the powered density is not positive")
    return math.log(integral) / (1.0 - delta)


# ---------------------------------------------------------------------------
# Asymptotes


class Asymptote(NamedTuple):
    """Leading-order approximations of the density, cdf, sf and hazard."""

    pdf: np.ndarray
    cdf: np.ndarray
    sf: np.ndarray
    hrf: np.ndarray


def asymptote_origin(dist: KwGMODistribution, t) -> Asymptote:
    """Approximations as the baseline cdf tends to zero.

    The density and hazard both behave like
    ``theta a b g / alpha * (1 - u**theta)**(a-1)``; the cdf tends to 0.
    """
    p = dist.params
    pc = dist.pieces(t)
    with np.errstate(invalid="ignore"):
        log_f = math.log(p.theta * p.a * p.b / p.alpha) + pc.log_g + xlogy_safe(p.a - 1.0, pc.log_1m_ut)
    f = np.exp(log_f)
    zero = np.zeros_like(f)
    return Asymptote(f, zero, zero + 1.0, f)


def asymptote_tail(dist: KwGMODistribution, t) -> Asymptote:
    """Approximations as the baseline survival function tends to zero.

    Uses ``u ~ alpha * Gbar`` so that the survival function behaves like
    ``(1 - (1 - (alpha Gbar)**theta)**a)**b``.
    """
    p = dist.params
    pc = dist.pieces(t)
    log_v = p.theta * (math.log(p.alpha) + pc.log_Gbar)  # log (alpha Gbar)^theta
    log_bracket = log1mexp_scaled(p.a, log1mexp(log_v), log_neg_log1mexp(log_v))  # log(1 - (1 - v)^a)
    with np.errstate(invalid="ignore"):
        log_head = (
            math.log(p.a * p.b * p.theta)
            + p.theta * math.log(p.alpha)
            + pc.log_g
            + xlogy_safe(p.theta - 1.0, pc.log_Gbar)
        )
        f = np.exp(log_head + xlogy_safe(p.b - 1.0, log_bracket))
        h = np.exp(log_head - log_bracket)
    sf = np.exp(p.b * log_bracket)
    return Asymptote(f, 1.0 - sf, sf, h)
