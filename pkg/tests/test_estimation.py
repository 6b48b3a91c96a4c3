from __future__ import annotations

import json
import math

import numpy as np
import pytest

from kwgmo.data import builtin_dataset
from kwgmo.estimation import (
    FitResult,
    confidence_intervals,
    family_hessian_diagonal,
    fit_mle,
    information_criteria,
    invert_information,
    log_likelihood,
    log_likelihood_expanded,
    observed_information,
    score,
    wald_interval,
)
from kwgmo.models import ModelSpec

TABLE1 = {"theta": 1.157, "alpha": 1.765, "a": 0.771, "b": 0.398, "lam": 2.672, "beta": 2.720}
TABLE3 = {"theta": 0.037, "alpha": 2.552, "a": 0.592, "b": 3.882, "lam": 0.019, "beta": 4.489}


def random_params(rng, spec):
    out = {}
    for name in spec.param_names:
        lo, hi = (0.5, 2.5) if name in ("a", "b", "theta") else (0.3, 3.0)
        out[name] = float(rng.uniform(lo, hi))
    return out


# -- likelihood --------------------------------------------------------------
def test_table_one_likelihood():
    spec = ModelSpec.parse("kwgmo:weibull")
    ll = log_likelihood(spec, TABLE1, builtin_dataset("nicotine"))
    assert ll == pytest.approx(-109.73, abs=2.0)
    # Frozen value of our own evaluator at the printed estimates.
    assert ll == pytest.approx(-109.73097846094934, abs=1e-8)


def test_table_three_likelihood():
    spec = ModelSpec.parse("kwgmo:weibull")
    assert log_likelihood(spec, TABLE3, builtin_dataset("carbon66")) == pytest.approx(-84.94, abs=2.0)


@pytest.mark.parametrize("lam", [1.0, 2.0, 0.5])
def test_reduced_exponential_likelihood(lam):
    spec = ModelSpec.parse("kwgmo:exp")
    ll = log_likelihood(spec, [1, 1, 1, 1, lam], [1.0, 2.0, 3.0])
    assert ll == pytest.approx(3 * math.log(lam) - 6 * lam, rel=1e-14)


def test_likelihood_is_neg_inf_outside_support_or_for_bad_params():
    spec = ModelSpec.parse("kwgmo:ep")
    assert log_likelihood(spec, [1, 1, 1, 1, 2, 2], [0.5, 2.0]) == -math.inf
    assert log_likelihood(ModelSpec.parse("kwgmo:exp"), [1, 1, -1, 1, 1], [1.0]) == -math.inf


@pytest.mark.parametrize("model", ["kwgmo:exp", "kwgmo:weibull", "kwgmo:lomax", "kwgmo:frechet", "kwgmo:mw"])
def test_expanded_likelihood_agrees(model, rng):
    spec = ModelSpec.parse(model)
    for _ in range(10):
        params = random_params(rng, spec)
        data = spec.build(params).sample(200, seed=int(rng.integers(1 << 30)))
        assert log_likelihood_expanded(spec, params, data) == pytest.approx(
            log_likelihood(spec, params, data), abs=1e-8, rel=1e-12
        )


# -- score -------------------------------------------------------------------
def numeric_gradient(spec, params, data):
    out = {}
    for name in spec.param_names:
        h = 1e-6 * params[name]
        up, dn = dict(params), dict(params)
        up[name] += h
        dn[name] -= h
        out[name] = (log_likelihood(spec, up, data) - log_likelihood(spec, dn, data)) / (2 * h)
    return out


@pytest.mark.parametrize("model", ["kwgmo:exp", "kwgmo:weibull"])
def test_score_against_differences(model, rng):
    spec = ModelSpec.parse(model)
    for _ in range(50):
        params = random_params(rng, spec)
        data = spec.build(params).sample(int(rng.integers(20, 200)), seed=int(rng.integers(1 << 30)))
        analytic = score(spec, params, data)
        numeric = numeric_gradient(spec, params, data)
        scale = max(1.0, max(abs(v) for v in numeric.values()))
        for name in spec.param_names:
            assert abs(analytic[name] - numeric[name]) <= 1e-5 * scale, name


@pytest.mark.parametrize("model", ["kwgmo:lomax", "kwgmo:gompertz", "gmo:frechet", "kw:mw"])
def test_score_with_numeric_baseline_gradient(model, rng):
    spec = ModelSpec.parse(model)
    for _ in range(5):
        params = random_params(rng, spec)
        data = spec.build(params).sample(100, seed=int(rng.integers(1 << 30)))
        analytic = score(spec, params, data)
        numeric = numeric_gradient(spec, params, data)
        scale = max(1.0, max(abs(v) for v in numeric.values()))
        for name in spec.param_names:
            assert abs(analytic[name] - numeric[name]) <= 1e-5 * scale, name


def test_score_b_formula(rng):
    spec = ModelSpec.parse("kwgmo:weibull")
    params = random_params(rng, spec)
    dist = spec.build(params)
    data = dist.sample(50, seed=3)
    q = np.log(dist.sf(data)) / params["b"]  # log(1 - (1 - u^theta)^a)
    assert score(spec, params, data)["b"] == pytest.approx(50 / params["b"] + q.sum(), rel=1e-10)


def test_score_b_vanishes_at_single_unit_datum():
    spec = ModelSpec.parse("kwgmo:exp")
    assert score(spec, [1, 1, 1, 1, 1], [1.0])["b"] == pytest.approx(0.0, abs=1e-14)


def test_score_rejects_boundary():
    spec = ModelSpec.parse("kwgmo:exp")
    with pytest.raises(ValueError):
        score(spec, [1, 1, 0, 1, 1], [1.0])
    with pytest.raises(ValueError):
        score(ModelSpec.parse("kwgmo:ep"), [1, 1, 1, 1, 1, 1], [0.5])


# -- information matrix ------------------------------------------------------
def test_b_second_derivative_exact():
    spec = ModelSpec.parse("kwgmo:exp")
    data = np.linspace(0.1, 4.0, 40)
    diag = family_hessian_diagonal(spec, [1.3, 0.7, 1.4, 2.0, 0.9], data)
    assert -diag["b"] == 10.0


def test_analytic_hessian_diagonal_matches_numeric(rng):
    spec = ModelSpec.parse("kwgmo:exp")
    for _ in range(10):
        params = random_params(rng, spec)
        data = spec.build(params).sample(100, seed=int(rng.integers(1 << 30)))
        diag = family_hessian_diagonal(spec, params, data)
        info = observed_information(spec, params, data)
        for i, name in enumerate(spec.param_names[:4]):
            assert -info[i, i] == pytest.approx(diag[name], rel=1e-3)


def test_information_symmetric():
    spec = ModelSpec.parse("kwgmo:weibull")
    info = observed_information(spec, TABLE1, builtin_dataset("nicotine"))
    assert np.max(np.abs(info - info.T)) == 0.0


def test_table_one_standard_errors_at_printed_estimates():
    spec = ModelSpec.parse("kwgmo:weibull")
    info = observed_information(spec, TABLE1, builtin_dataset("nicotine"))
    vcov, degenerate = invert_information(info)
    se = dict(zip(spec.param_names, np.sqrt(np.diag(vcov))))
    printed = {"theta": 0.521, "alpha": 0.901, "a": 0.151, "b": 0.175, "lam": 0.926, "beta": 0.409}
    assert not degenerate
    for name, value in printed.items():
        assert se[name] == pytest.approx(value, rel=0.2), name


def test_pseudo_inverse_flags_singular_matrix():
    vcov, degenerate = invert_information(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert degenerate
    np.testing.assert_allclose(vcov, np.full((2, 2), 0.25), atol=1e-12)
    vcov, degenerate = invert_information(np.diag([4.0, 0.25]))
    assert not degenerate
    np.testing.assert_allclose(vcov, np.diag([0.25, 4.0]))


# -- intervals and criteria --------------------------------------------------
def test_wald_intervals():
    lo, hi = wald_interval(0.0, 1.0, 0.5)
    assert lo == pytest.approx(-0.6744897501960817, rel=1e-12)
    assert hi == pytest.approx(0.6744897501960817, rel=1e-12)
    # The printed bounds come from unrounded estimates, so compare at table precision.
    lo, hi = wald_interval(0.398, 0.175)
    assert lo == pytest.approx(0.05, abs=0.01) and hi == pytest.approx(0.74, abs=0.01)
    lo, hi = wald_interval(0.047, 0.087)
    assert lo == pytest.approx(-0.1235, abs=1e-3) and hi == pytest.approx(0.2175, abs=1e-3)
    with pytest.raises(ValueError):
        wald_interval(0.0, 1.0, 1.0)


@pytest.mark.parametrize(
    "loglik,k,n,expected",
    [(-109.73, 6, 346, (231.46, 254.54, 231.71, 240.66)), (-80.33, 6, 40, (172.66, 182.79, 175.21, 176.33))],
)
def test_information_criteria_examples(loglik, k, n, expected):
    ic = information_criteria(loglik, k, n)
    # HQIC is compared at the loose end: the printed value came from an unrounded log-likelihood.
    for key, value in zip(("aic", "bic", "caic"), expected):
        assert ic[key] == pytest.approx(value, abs=0.01)
    assert ic["hqic"] == pytest.approx(expected[3], abs=0.02)


def test_information_criteria_zero_case():
    assert information_criteria(0.0, 0, 10) == {"aic": 0.0, "bic": 0.0, "caic": 0.0, "hqic": 0.0}


def test_information_criteria_formulas():
    ic = information_criteria(-50.0, 3, 30)
    assert ic["aic"] == 106.0
    assert ic["bic"] == pytest.approx(3 * math.log(30) + 100.0, rel=1e-15)
    assert ic["caic"] == pytest.approx(106.0 + 24.0 / 26.0, rel=1e-15)
    assert ic["hqic"] == pytest.approx(6 * math.log(math.log(30)) + 100.0, rel=1e-15)


def test_information_criteria_domain():
    with pytest.raises(ValueError):
        information_criteria(-10.0, 6, 7)


# -- fitting -----------------------------------------------------------------
@pytest.fixture(scope="module")
def synthetic_exponential():
    spec = ModelSpec.parse("kwgmo:exp")
    data = spec.build([1, 1, 1, 1, 1]).sample(2000, seed=11)
    return spec, data, fit_mle(spec, data, n_starts=20, seed=0)


def test_fit_dominates_true_parameters(synthetic_exponential):
    spec, data, fit = synthetic_exponential
    assert fit.loglik >= log_likelihood(spec, [1, 1, 1, 1, 1], data)


def test_fit_converges_on_exponential_draws(synthetic_exponential):
    _, _, fit = synthetic_exponential
    assert fit.converged
    assert fit.grad_norm < 1e-3


def test_stage_likelihoods_never_decrease(synthetic_exponential):
    _, _, fit = synthetic_exponential
    stages = fit.stage_logliks
    assert stages["simplex"] >= stages["anchor"]
    assert stages["polished"] >= stages["simplex"]
    assert fit.loglik == stages["polished"]


def test_fit_result_json(synthetic_exponential, tmp_path):
    spec, data, fit = synthetic_exponential
    doc = json.loads(fit.to_json())
    assert list(doc)[:15] == ["model", "data", "estimates", "se", "ci", "level", "loglik", "aic", "bic",
                              "caic", "hqic", "converged", "n", "k", "seed"]
    again = FitResult.from_json(fit.to_json())
    assert log_likelihood(again.spec, again.estimates, data) == pytest.approx(fit.loglik, abs=1e-8)
    assert again.estimates == fit.estimates
    assert again.k == 5 and again.n == 2000


def test_fit_result_fields(synthetic_exponential):
    _, _, fit = synthetic_exponential
    assert fit.k == 5
    assert fit.vcov.shape == (5, 5)
    np.testing.assert_array_equal(fit.vcov, fit.vcov.T)
    assert all(fit.se[name] >= 0 for name in fit.se)
    assert confidence_intervals(fit, fit.level) == fit.ci
    assert 0 <= fit.best_start_index < 20


def test_fit_reproducible():
    spec = ModelSpec.parse("gmo:weibull")
    data = builtin_dataset("carbon66")
    one = fit_mle(spec, data, n_starts=3, seed=5)
    two = fit_mle(spec, data, n_starts=3, seed=5)
    assert one.to_json() == two.to_json()
    np.testing.assert_array_equal(one.vcov, two.vcov)


def test_fit_with_fixed_parameter():
    spec = ModelSpec.parse("gmo:weibull", fixed={"alpha": 1.0})
    fit = fit_mle(spec, builtin_dataset("carbon66"), n_starts=2, seed=1)
    assert fit.k == 3
    assert fit.estimates["alpha"] == 1.0
    assert set(fit.se) == {"theta", "lam", "beta"}


def test_baseline_only_fit_matches_weibull_mle():
    data = builtin_dataset("carbon66").values
    fit = fit_mle(ModelSpec.parse("weibull"), data, n_starts=1)
    # Weibull profile equation for the shape, solved independently.
    from scipy import optimize

    def profile(beta):
        tb = data**beta
        return 1 / beta + np.log(data).mean() - (tb * np.log(data)).sum() / tb.sum()

    beta = optimize.brentq(profile, 0.5, 20.0, xtol=1e-14)
    lam = len(data) / (data**beta).sum()
    assert fit.estimates["beta"] == pytest.approx(beta, rel=1e-5)
    assert fit.estimates["lam"] == pytest.approx(lam, rel=1e-4)


def test_fit_input_validation():
    spec = ModelSpec.parse("kwgmo:weibull")
    with pytest.raises(ValueError):
        fit_mle(spec, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
    with pytest.raises(ValueError):
        fit_mle(ModelSpec.parse("kwgmo:ep"), np.linspace(0.5, 3, 20))
    with pytest.raises(ValueError):
        fit_mle(spec, builtin_dataset("turbocharger"), n_starts=0)


@pytest.mark.slow
def test_wald_coverage_for_exponential_rate():
    """95% intervals for lam cover the truth in at least 88% of 200 replications."""
    spec = ModelSpec.parse("kwgmo:exp")
    truth = {"theta": 1.5, "alpha": 2.0, "a": 1.2, "b": 0.8, "lam": 1.0}
    dist = spec.build(truth)
    covered = 0
    for rep in range(200):
        data = dist.sample(500, seed=10_000 + rep)
        fit = fit_mle(spec, data, n_starts=1, seed=rep)
        lo, hi = fit.ci["lam"]
        covered += lo <= truth["lam"] <= hi
    print(f"coverage of lam: {covered}/200")
    assert covered / 200 >= 0.88
