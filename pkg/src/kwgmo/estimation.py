"""Maximum likelihood fitting with standard errors and information criteria.

Fitting runs in log-parameter space inside the box ``[1e-6, 1e6]``: a
baseline-only fit anchors the start, a Nelder-Mead simplex runs from each of
several perturbed starts, and the best simplex result is polished with
L-BFGS-B using the analytic score. Standard errors come from the inverse of
the observed information (a central-difference Hessian on the original
scale), and intervals are plain Wald intervals on that scale.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import optimize, stats

from ._numeric import xlogy_safe
from .baseline import initial_baseline
from .family import FamilyParams, KwGMODistribution
from .models import ModelSpec

__all__ = [
    "FitError",
    "FitResult",
    "log_likelihood",
    "log_likelihood_expanded",
    "score",
    "family_hessian_diagonal",
    "observed_information",
    "invert_information",
    "wald_interval",
    "confidence_intervals",
    "information_criteria",
    "fit_mle",
]

LOWER_BOUND = 1e-6
UPPER_BOUND = 1e6
_LOG_LO, _LOG_HI = math.log(LOWER_BOUND), math.log(UPPER_BOUND)
_EDGE_TOL = 1e-3  # in log units
GRAD_TOL = 1e-3
SIMPLEX_TOL = 1e-4
# Generator parameters whose arrival at the box edge marks a fit non-converged.
IDENTIFIABILITY_GUARD = ("alpha", "theta")


class FitError(RuntimeError):
    """Raised when no start produced a finite likelihood."""


def _data_array(data) -> np.ndarray:
    values = getattr(data, "values", data)
    return np.asarray(values, dtype=float)


# ---------------------------------------------------------------------------
# Likelihood and score


def log_likelihood(spec: ModelSpec, params, data) -> float:
    """Sum of log-densities; ``-inf`` when any term is not finite."""
    t = _data_array(data)
    try:
        dist = spec.build(params)
    except ValueError:
        return -math.inf
    with np.errstate(all="ignore"):
        total = float(np.sum(dist.logpdf(t)))
    return total if math.isfinite(total) else -math.inf


def log_likelihood_expanded(spec: ModelSpec, params, data) -> float:
    """The log-likelihood assembled from its separate sums.

    Written out term by term from baseline log-quantities, independently of
    the density evaluator, so the two can be cross-checked.
    """
    t = _data_array(data)
    dist = spec.build(params)
    p = dist.params
    n = t.size
    bl = dist.baseline
    log_g = np.asarray(bl.logpdf(t))
    log_G = np.asarray(bl.logcdf(t))
    log_Gbar = np.asarray(bl.logsf(t))
    Gbar = np.exp(log_Gbar)
    # 1 - alpha_bar * Gbar, written as G + alpha * Gbar to stay positive.
    one_minus = np.exp(log_G) + p.alpha * Gbar
    ratio = p.alpha * Gbar / one_minus
    inner = -np.expm1(p.theta * np.log(ratio))  # 1 - ratio**theta
    outer = -np.expm1(p.a * np.log(inner))  # 1 - inner**a
    with np.errstate(all="ignore"):
        total = (
            n * math.log(p.a * p.b)
            + n * math.log(p.theta)
            + n * p.theta * math.log(p.alpha)
            + np.sum(log_g)
            + (p.theta - 1.0) * np.sum(log_Gbar)
            - (p.theta + 1.0) * np.sum(np.log(one_minus))
            + (p.a - 1.0) * np.sum(np.log(inner))
            + (p.b - 1.0) * np.sum(np.log(outer))
        )
    return float(total) if math.isfinite(total) else -math.inf


@dataclass(frozen=True)
class _ScoreTerms:
    n: int
    s: np.ndarray  # log u
    u: np.ndarray
    m: np.ndarray  # log(1 - u^theta)
    q: np.ndarray  # log(1 - (1 - u^theta)^a)
    rho1: np.ndarray  # v / (1 - v), v = u^theta
    rho2: np.ndarray  # w / (1 - w), w = (1 - u^theta)^a
    rho12: np.ndarray  # rho1 * rho2, finite where v rounds to 1
    rho2_m: np.ndarray  # rho2 * m, zero where v rounds to 1
    inv_D: np.ndarray  # 1 / (1 - alpha_bar * Gbar)


def _score_terms(dist: KwGMODistribution, t: np.ndarray) -> _ScoreTerms:
    p = dist.params
    pc = dist.pieces(t)
    with np.errstate(over="ignore", invalid="ignore"):
        rho1 = np.exp(p.theta * pc.log_u - pc.log_1m_ut)
        rho2 = np.exp(p.a * pc.log_1m_ut - pc.log_1m_w)
        rho12 = np.exp(p.theta * pc.log_u + xlogy_safe(p.a - 1.0, pc.log_1m_ut) - pc.log_1m_w)
        rho2_m = np.where(rho2 == 0.0, 0.0, rho2 * pc.log_1m_ut)
    return _ScoreTerms(t.size, pc.log_u, np.exp(pc.log_u), pc.log_1m_ut, pc.log_1m_w,
                       rho1, rho2, rho12, rho2_m, np.exp(-pc.log_D))


def score(spec: ModelSpec, params, data) -> dict[str, float]:
    """Gradient of the log-likelihood for every parameter of ``spec``.

    Generator components are analytic. Baseline components use the
    baseline's log-density and log-survival gradients, which are analytic
    for the exponential and Weibull baselines and central differences
    otherwise.

    Raises:
        ValueError: if any parameter is not strictly positive or data fall
            outside the support.
    """
    full = spec.as_mapping(params)
    if any(not (v > 0 and math.isfinite(v)) for v in full.values()):
        raise ValueError("score requires strictly positive parameters")
    t = _data_array(data)
    dist = spec.build(full)
    if not np.all(dist.support.contains(t)):
        raise ValueError("score requires all observations inside the support")
    p = dist.params
    st = _score_terms(dist, t)
    a, b, alpha, theta = p.a, p.b, p.alpha, p.theta
    # Derivative of the per-observation log-density with respect to log u.
    psi = (theta + 1.0) - theta * (a - 1.0) * st.rho1 + theta * a * (b - 1.0) * st.rho12
    s_alpha = (1.0 - st.u) / alpha
    grads = {
        "theta": np.sum(1.0 / theta + st.s * (1.0 - (a - 1.0) * st.rho1 + (b - 1.0) * a * st.rho12)),
        "alpha": np.sum(-1.0 / alpha + psi * s_alpha),
        "a": np.sum(1.0 / a + st.m - (b - 1.0) * st.rho2_m),
        "b": st.n / b + np.sum(st.q),
    }
    if spec.baseline_names:
        dlogg, dlogsf = dist.baseline.log_parts_grad(t)
        for j, name in enumerate(spec.baseline_names):
            grads[name] = np.sum(dlogg[j] - 2.0 * dlogsf[j] + psi * dlogsf[j] * st.inv_D)
    return {name: float(grads[name]) for name in spec.param_names}


def family_hessian_diagonal(spec: ModelSpec, params, data) -> dict[str, float]:
    """Analytic second derivatives of the log-likelihood in theta, alpha, a, b.

    Only the diagonal entries for the generator parameters the model carries
    are returned.
    """
    full = spec.as_mapping(params)
    t = _data_array(data)
    dist = spec.build(full)
    p = dist.params
    a, b, alpha, theta = p.a, p.b, p.alpha, p.theta
    st = _score_terms(dist, t)
    r1, r2, s = st.rho1, st.rho2, st.s

    # theta
    d_r1 = s * r1 * (1.0 + r1)
    d_r2 = r2 * (1.0 + r2) * (-a * r1 * s)
    d_phi = -(a - 1.0) * d_r1 + (b - 1.0) * a * (d_r1 * r2 + r1 * d_r2)
    h_theta = np.sum(-1.0 / theta**2 + s * d_phi)

    # alpha
    s_alpha = (1.0 - st.u) / alpha
    d_s_alpha = -(1.0 - st.u) * (1.0 + st.u) / alpha**2
    psi = (theta + 1.0) - theta * (a - 1.0) * r1 + theta * a * (b - 1.0) * r1 * r2
    a_r1 = r1 * (1.0 + r1) * theta * s_alpha
    a_r2 = r2 * (1.0 + r2) * (-a * r1 * theta * s_alpha)
    d_psi = -theta * (a - 1.0) * a_r1 + theta * a * (b - 1.0) * (a_r1 * r2 + r1 * a_r2)
    h_alpha = np.sum(1.0 / alpha**2 + psi * d_s_alpha + s_alpha * d_psi)

    # a
    h_a = np.sum(-1.0 / a**2 - (b - 1.0) * st.m**2 * r2 * (1.0 + r2))

    h_b = -st.n / b**2
    out = {"theta": h_theta, "alpha": h_alpha, "a": h_a, "b": h_b}
    return {name: float(out[name]) for name in spec.family_names}


# ---------------------------------------------------------------------------
# Observed information


def observed_information(spec: ModelSpec, params, data, names: Sequence[str] | None = None) -> np.ndarray:
    """Negative Hessian of the log-likelihood by central differences.

    Steps are ``h_j = max(1e-4 |x_j|, 1e-6)`` on the original scale, cross
    terms use the four-point stencil, and the result is symmetrized.

    Args:
        spec: model specification.
        params: parameter vector or mapping.
        data: observations.
        names: parameters to differentiate; defaults to the free ones.
    """
    full = spec.as_mapping(params)
    names = tuple(spec.free_names if names is None else names)
    t = _data_array(data)
    x0 = np.array([full[n] for n in names])
    h = np.maximum(1e-4 * np.abs(x0), 1e-6)
    k = len(names)

    def ll(x: np.ndarray) -> float:
        values = dict(full)
        values.update(zip(names, x))
        return log_likelihood(spec, values, t)

    f0 = ll(x0)
    H = np.empty((k, k))
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h[i]
        H[i, i] = (ll(x0 + ei) - 2.0 * f0 + ll(x0 - ei)) / h[i] ** 2
        for j in range(i):
            ej = np.zeros(k)
            ej[j] = h[j]
            H[i, j] = H[j, i] = (
                ll(x0 + ei + ej) - ll(x0 + ei - ej) - ll(x0 - ei + ej) + ll(x0 - ei - ej)
            ) / (4.0 * h[i] * h[j])
    info = -H
    return 0.5 * (info + info.T)


def invert_information(info: np.ndarray) -> tuple[np.ndarray, bool]:
    """Covariance matrix from an information matrix.

    Eigenvalues below ``1e-10`` times the largest are dropped (a clipped
    pseudo-inverse) and the second return value flags that this happened.
    """
    info = np.asarray(info, dtype=float)
    if info.size == 0:
        return info.copy(), False
    if not np.all(np.isfinite(info)):
        return np.full_like(info, np.nan), True
    w, V = np.linalg.eigh(0.5 * (info + info.T))
    cutoff = 1e-10 * max(float(np.max(w)), 0.0)
    keep = w > cutoff
    degenerate = not bool(np.all(keep)) or float(np.max(w)) <= 0
    inv_w = np.where(keep, 1.0 / np.where(keep, w, 1.0), 0.0)
    vcov = (V * inv_w) @ V.T
    return 0.5 * (vcov + vcov.T), degenerate


def wald_interval(estimate: float, se: float, level: float = 0.95) -> tuple[float, float]:
    """``estimate -/+ z * se`` with ``z`` the standard normal quantile."""
    if not 0 < level < 1:
        raise ValueError("confidence level must lie in (0, 1)")
    z = float(stats.norm.ppf(0.5 + level / 2.0))
    return estimate - z * se, estimate + z * se


def information_criteria(loglik: float, k: int, n: int) -> dict[str, float]:
    """AIC, BIC, CAIC (small-sample corrected AIC) and HQIC.

    Raises:
        ValueError: if ``n <= k + 1``.
    """
    if n <= k + 1:
        raise ValueError(f"information criteria need n > k + 1 (n={n}, k={k})")
    aic = 2.0 * k - 2.0 * loglik
    return {
        "aic": aic,
        "bic": k * math.log(n) - 2.0 * loglik,
        "caic": aic + 2.0 * k * (k + 1) / (n - k - 1),
        "hqic": 2.0 * k * math.log(math.log(n)) - 2.0 * loglik,
    }


# ---------------------------------------------------------------------------
# Fit results


@dataclass
class FitResult:
    """Outcome of a maximum likelihood fit.

    ``estimates``, ``se`` and ``ci`` are keyed by parameter name in the
    layout order of the model; fixed parameters appear in ``estimates`` only.
    """

    model: str
    data: str
    estimates: dict[str, float]
    se: dict[str, float]
    ci: dict[str, tuple[float, float]]
    level: float
    loglik: float
    aic: float
    bic: float
    caic: float
    hqic: float
    converged: bool
    n: int
    k: int
    seed: int | None
    vcov: np.ndarray
    vcov_degenerate: bool
    n_starts: int
    best_start_index: int
    grad_norm: float
    simplex_diameter: float
    at_bound: list[str] = field(default_factory=list)
    fixed: dict[str, float] = field(default_factory=dict)
    options: dict[str, float] = field(default_factory=dict)
    stage_logliks: dict[str, float] = field(default_factory=dict)

    @property
    def spec(self) -> ModelSpec:
        return ModelSpec.parse(self.model, self.fixed, self.options)

    @property
    def free_names(self) -> tuple[str, ...]:
        return tuple(self.se)

    def distribution(self) -> KwGMODistribution:
        return self.spec.build(self.estimates)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "data": self.data,
            "estimates": dict(self.estimates),
            "se": dict(self.se),
            "ci": {k: [float(lo), float(hi)] for k, (lo, hi) in self.ci.items()},
            "level": self.level,
            "loglik": self.loglik,
            "aic": self.aic,
            "bic": self.bic,
            "caic": self.caic,
            "hqic": self.hqic,
            "converged": self.converged,
            "n": self.n,
            "k": self.k,
            "seed": self.seed,
            "fixed": dict(self.fixed),
            "options": dict(self.options),
            "diagnostics": {
                "vcov": [[float(x) for x in row] for row in np.asarray(self.vcov)],
                "vcov_degenerate": self.vcov_degenerate,
                "n_starts": self.n_starts,
                "best_start_index": self.best_start_index,
                "grad_norm": self.grad_norm,
                "simplex_diameter": self.simplex_diameter,
                "at_bound": list(self.at_bound),
                "stage_logliks": dict(self.stage_logliks),
            },
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(_json_safe(self.to_dict()), indent=indent, allow_nan=True)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "FitResult":
        diag = doc.get("diagnostics", {})
        return cls(
            model=doc["model"],
            data=doc.get("data", ""),
            estimates={k: float(v) for k, v in doc["estimates"].items()},
            se={k: float(v) for k, v in doc.get("se", {}).items()},
            ci={k: (float(v[0]), float(v[1])) for k, v in doc.get("ci", {}).items()},
            level=float(doc.get("level", 0.95)),
            loglik=float(doc["loglik"]),
            aic=float(doc.get("aic", math.nan)),
            bic=float(doc.get("bic", math.nan)),
            caic=float(doc.get("caic", math.nan)),
            hqic=float(doc.get("hqic", math.nan)),
            converged=bool(doc.get("converged", False)),
            n=int(doc.get("n", 0)),
            k=int(doc.get("k", 0)),
            seed=doc.get("seed"),
            vcov=np.asarray(diag.get("vcov", []), dtype=float),
            vcov_degenerate=bool(diag.get("vcov_degenerate", False)),
            n_starts=int(diag.get("n_starts", 0)),
            best_start_index=int(diag.get("best_start_index", 0)),
            grad_norm=float(diag.get("grad_norm", math.nan)),
            simplex_diameter=float(diag.get("simplex_diameter", math.nan)),
            at_bound=list(diag.get("at_bound", [])),
            fixed={k: float(v) for k, v in doc.get("fixed", {}).items()},
            options={k: float(v) for k, v in doc.get("options", {}).items()},
            stage_logliks={k: float(v) for k, v in diag.get("stage_logliks", {}).items()},
        )

    @classmethod
    def from_json(cls, text: str) -> "FitResult":
        return cls.from_dict(json.loads(text))


def _json_safe(obj):
    # Non-finite floats become strings so the document stays standard JSON.
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_safe(v) for v in obj]
    return obj


def confidence_intervals(fit: FitResult, level: float = 0.95) -> dict[str, tuple[float, float]]:
    """Wald intervals for every free parameter of a fit."""
    return {name: wald_interval(fit.estimates[name], se, level) for name, se in fit.se.items()}


# ---------------------------------------------------------------------------
# Optimizer orchestration


@dataclass
class _StartOutcome:
    index: int
    x: np.ndarray  # log parameters
    loglik: float
    simplex_diameter: float
    success: bool


def _fit_baseline_anchor(spec: ModelSpec, t: np.ndarray) -> dict[str, float]:
    """Baseline-only MLE from moment-type starting values."""
    guess = initial_baseline(spec.baseline_id, t, **spec.options)
    values = dict(zip(spec.baseline_names, guess.params))
    values.update({k: v for k, v in spec.fixed.items() if k in spec.baseline_names})
    free = [n for n in spec.baseline_names if n not in spec.fixed]
    if not free:
        return values
    base_spec = ModelSpec("baseline", spec.baseline_id, {k: v for k, v in spec.fixed.items() if k in spec.baseline_names}, spec.options)

    def nll(z: np.ndarray) -> float:
        vals = dict(values)
        vals.update(zip(free, np.exp(z)))
        val = -log_likelihood(base_spec, vals, t)
        return val if math.isfinite(val) else math.inf

    x0 = np.log([values[n] for n in free])
    bounds = [(_LOG_LO, _LOG_HI)] * len(free)
    x0 = np.clip(x0, _LOG_LO, _LOG_HI)
    if math.isfinite(nll(x0)):
        res = optimize.minimize(nll, x0, method="Nelder-Mead", bounds=bounds,
                                options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 4000, "adaptive": True})
        if math.isfinite(res.fun) and res.fun <= nll(x0):
            values.update(zip(free, np.exp(res.x)))
    return values


def _simplex_diameter(sim: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(sim[1:] - sim[0], axis=1))) if len(sim) > 1 else 0.0


def fit_mle(
    spec: ModelSpec,
    data,
    *,
    n_starts: int = 20,
    seed: int | None = 0,
    level: float = 0.95,
    maxiter: int | None = None,
    data_name: str | None = None,
) -> FitResult:
    """Multi-start maximum likelihood fit.

    Args:
        spec: model specification; fixed parameters are held constant.
        data: a :class:`~kwgmo.data.Dataset` or array of observations.
        n_starts: number of simplex starts. Start 0 is the anchor itself, the
            others perturb every free log-parameter by ``U(-0.5, 0.5)``.
        seed: seed of the perturbation stream.
        level: confidence level of the reported intervals.
        maxiter: simplex iteration cap per start (default ``1000 * k``).
        data_name: label recorded in the result.

    The fit counts as converged when the best simplex met its tolerances
    (diameter below ``SIMPLEX_TOL`` in log units), the largest log-scale
    score component divided by ``n`` is below ``GRAD_TOL``, and neither
    ``alpha`` nor ``theta`` sits at the box edge. Every parameter at the edge
    is listed in ``at_bound`` regardless.

    Raises:
        ValueError: if there are too few observations or any lies outside
            the model's support.
        FitError: if every start failed to give a finite likelihood.
    """
    t = _data_array(data)
    if data_name is None:
        data_name = getattr(data, "name", "data")
    n, k = t.size, spec.k
    if n < k + 2:
        raise ValueError(f"need at least k + 2 = {k + 2} observations, got {n}")
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    template = spec.make_baseline()
    if not np.all(template.support.contains(t)):
        raise ValueError(f"data fall outside the support of baseline {spec.baseline_id}")

    free = spec.free_names
    anchor = {name: 1.0 for name in spec.family_names}
    anchor.update(_fit_baseline_anchor(spec, t))
    anchor.update(spec.fixed)
    x_anchor = np.clip(np.log([anchor[name] for name in free]), _LOG_LO, _LOG_HI)
    bounds = [(_LOG_LO, _LOG_HI)] * k

    def to_values(z: np.ndarray) -> dict[str, float]:
        vals = dict(spec.fixed)
        vals.update(zip(free, np.exp(z)))
        return vals

    # Objective on the log scale; builds the distribution directly from the
    # template baseline to skip name validation on every evaluation.
    family_fixed = {name: spec.fixed.get(name, 1.0) for name in ("a", "b", "alpha", "theta")}
    baseline_slots = [free.index(n) if n in free else None for n in spec.baseline_names]
    baseline_fixed = [spec.fixed.get(n) for n in spec.baseline_names]
    family_slots = {name: free.index(name) for name in spec.family_names if name in free}

    def nll(z: np.ndarray) -> float:
        w = np.exp(z)
        fam = dict(family_fixed)
        fam.update({name: w[i] for name, i in family_slots.items()})
        base = [w[i] if i is not None else v for i, v in zip(baseline_slots, baseline_fixed)]
        try:
            dist = KwGMODistribution(template.with_params(base), FamilyParams(**fam))
        except ValueError:
            return math.inf
        with np.errstate(all="ignore"):
            val = -float(np.sum(dist.logpdf(t)))
        return val if math.isfinite(val) else math.inf

    def nll_grad(z: np.ndarray) -> np.ndarray:
        vals = to_values(z)
        try:
            g = score(spec, vals, t)
        except ValueError:
            return np.zeros_like(z)
        grad = np.array([-g[name] * vals[name] for name in free])
        return np.where(np.isfinite(grad), grad, 0.0)

    rng = np.random.Generator(np.random.Philox(seed))
    maxiter = maxiter or 1000 * max(k, 1)
    outcomes: list[_StartOutcome] = []
    for idx in range(n_starts):
        x0 = x_anchor if idx == 0 else np.clip(x_anchor + rng.uniform(-0.5, 0.5, size=k), _LOG_LO, _LOG_HI)
        if k == 0:
            outcomes.append(_StartOutcome(idx, x0, -nll(x0), 0.0, True))
            break
        if not math.isfinite(nll(x0)):
            continue
        res = optimize.minimize(
            nll, x0, method="Nelder-Mead", bounds=bounds,
            options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": maxiter, "maxfev": 2 * maxiter, "adaptive": True},
        )
        if not math.isfinite(res.fun):
            continue
        sim = res.final_simplex[0]
        outcomes.append(_StartOutcome(idx, res.x, -float(res.fun), _simplex_diameter(sim), bool(res.success)))
    if not outcomes:
        raise FitError("every start gave a non-finite likelihood")

    # Best simplex result; ties go to the lowest start index.
    best = max(outcomes, key=lambda o: (o.loglik, -o.index))
    x_best, ll_best = best.x, best.loglik
    stage = {"anchor": -nll(x_anchor), "simplex": ll_best}
    if k > 0:
        polished = optimize.minimize(nll, x_best, jac=nll_grad, method="L-BFGS-B", bounds=bounds,
                                     options={"maxiter": 2000, "ftol": 1e-15, "gtol": 1e-9})
        if math.isfinite(polished.fun) and -polished.fun > ll_best:
            x_best, ll_best = polished.x, -float(polished.fun)
    stage["polished"] = ll_best

    estimates = spec.as_mapping(to_values(x_best))
    at_bound = [name for name, z in zip(free, x_best) if z - _LOG_LO < _EDGE_TOL or _LOG_HI - z < _EDGE_TOL]
    if k > 0:
        g = score(spec, estimates, t)
        grad_norm = float(max(abs(g[name] * estimates[name]) for name in free) / n)
    else:
        grad_norm = 0.0
    converged = (
        math.isfinite(grad_norm)
        and grad_norm < GRAD_TOL
        and best.success
        and best.simplex_diameter < SIMPLEX_TOL
        and not any(name in IDENTIFIABILITY_GUARD for name in at_bound)
    )

    info = observed_information(spec, estimates, t, free)
    vcov, degenerate = invert_information(info)
    se_vals = np.sqrt(np.clip(np.diag(vcov), 0.0, None)) if k else np.zeros(0)
    se = {name: float(v) for name, v in zip(free, se_vals)}
    ci = {name: wald_interval(estimates[name], se[name], level) for name in free}
    ic = information_criteria(ll_best, k, n)
    return FitResult(
        model=spec.name,
        data=data_name,
        estimates=estimates,
        se=se,
        ci=ci,
        level=level,
        loglik=ll_best,
        converged=bool(converged),
        n=n,
        k=k,
        seed=seed,
        vcov=vcov,
        vcov_degenerate=degenerate,
        n_starts=n_starts,
        best_start_index=best.index,
        grad_norm=grad_norm,
        simplex_diameter=best.simplex_diameter,
        at_bound=at_bound,
        fixed=dict(spec.fixed),
        options=dict(spec.options),
        stage_logliks=stage,
        **ic,
    )

