from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from kwgmo._numeric import DivergenceError
from kwgmo.baseline import Exponential, Frechet, Lomax, Weibull
from kwgmo.family import FamilyParams, KwGMODistribution
from kwgmo.series import (
    SeriesApproximationWarning,
    asymptote_origin,
    asymptote_tail,
    expand_pdf,
    expand_sf,
    mgf,
    moment,
    order_stat_expansion,
    order_stat_moment,
    order_stat_pdf,
    pwm_gmo,
    renyi_coefficients,
    renyi_entropy,
)

from conftest import EIGHT_FAMILIES, interior_grid, random_baseline


def integer_model(rng, family, max_ab=4):
    base = random_baseline(rng, family)
    params = FamilyParams(
        a=float(rng.integers(1, max_ab + 1)),
        b=float(rng.integers(1, max_ab + 1)),
        alpha=float(np.exp(rng.uniform(np.log(0.3), np.log(3.0)))),
        theta=float(rng.uniform(0.5, 2.5)),
    )
    return KwGMODistribution(base, params)


def reduced_exponential(lam=1.0, **family):
    return KwGMODistribution(Exponential(lam), FamilyParams(**family))


# -- coefficient shapes ------------------------------------------------------
def test_single_term_when_b_is_one():
    d = KwGMODistribution(Weibull(1.0, 1.5), FamilyParams(2.7, 1.0, 0.6, 1.3))
    ex = expand_pdf(d)
    np.testing.assert_allclose(ex.A.values, [2.7])
    t = interior_grid(d)
    np.testing.assert_allclose(ex.pdf_a_form(t), d.pdf(t), rtol=1e-12)


def test_two_terms_when_b_is_two():
    a = 1.7
    d = KwGMODistribution(Weibull(1.0, 1.5), FamilyParams(a, 2.0, 0.6, 1.3))
    ex = expand_pdf(d)
    np.testing.assert_allclose(ex.A.values, [2 * a, -2 * a], rtol=1e-15)
    np.testing.assert_allclose(ex.A.exponents, [a - 1, 2 * a - 1], rtol=1e-15)
    assert not ex.A.approximate and ex.A.truncation_residual == 0.0
    t = interior_grid(d)
    np.testing.assert_allclose(ex.pdf_a_form(t), d.pdf(t), rtol=1e-12)


def test_sf_coefficients_when_b_is_one():
    d = KwGMODistribution(Exponential(1.0), FamilyParams(2.0, 1.0, 1.5, 0.8))
    ex = expand_sf(d)
    np.testing.assert_allclose(ex.C.values, [1.0, -1.0])
    assert ex.sf_c_form(0.0)[0] == pytest.approx(1.0, abs=1e-15)
    assert ex.sf_delta_form(0.0)[0] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("family", EIGHT_FAMILIES)
def test_expansions_match_direct_evaluation(family):
    rng = np.random.default_rng(1000 + sum(map(ord, family)))
    for _ in range(4):
        d = integer_model(rng, family)
        t = interior_grid(d, 100)
        pdf, sf = d.pdf(t), d.sf(t)
        ex = expand_pdf(d)
        assert np.max(np.abs(ex.pdf_a_form(t) - pdf)) < 1e-10
        assert np.max(np.abs(ex.pdf_b_form(t) - pdf)) < 1e-10
        # The mixture form adds alternating weights, so round-off scales with their mass.
        scale = np.abs(ex.mixture_weights).sum() * max(1.0, pdf.max())
        assert np.max(np.abs(ex.pdf_mixture(t) - pdf)) < 1e-13 * scale
        sx = expand_sf(d)
        assert np.max(np.abs(sx.sf_c_form(t) - sf)) < 1e-10
        assert np.max(np.abs(sx.sf_delta_form(t) - sf)) < 1e-10


def test_mixture_weights_sum_to_one():
    d = KwGMODistribution(Exponential(1.0), FamilyParams(3.0, 2.0, 0.7, 1.1))
    assert expand_pdf(d).mixture_weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_partial_sums_converge_for_fractional_b():
    d = KwGMODistribution(Weibull(1.0, 2.0), FamilyParams(1.5, 2.5, 0.8, 1.2))
    t = interior_grid(d, 50)
    errors = [np.max(np.abs(expand_pdf(d, J).pdf_a_form(t) - d.pdf(t))) for J in (2, 5, 10, 20, 40)]
    assert all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
    ex = expand_pdf(d, 40)
    assert ex.A.approximate
    assert ex.A.truncation_residual > 0


def test_truncation_warning_for_fractional_b():
    d = KwGMODistribution(Exponential(1.0), FamilyParams(1.5, 0.5, 1.0, 1.0))
    with pytest.warns(SeriesApproximationWarning):
        moment(d, 1, method="series", truncation=2)


def test_truncation_order_validated():
    with pytest.raises(ValueError):
        expand_pdf(reduced_exponential(), 0)
    with pytest.raises(ValueError):
        expand_sf(reduced_exponential(), 0)


# -- order statistics --------------------------------------------------------
def test_single_observation_order_statistic():
    d = KwGMODistribution(Weibull(1.0, 1.5), FamilyParams(2.0, 3.0, 0.5, 1.4))
    t = interior_grid(d, 30)
    np.testing.assert_allclose(order_stat_pdf(d, 1, 1, t), d.pdf(t), rtol=1e-14)


def test_maximum_density():
    d = KwGMODistribution(Weibull(1.0, 1.5), FamilyParams(2.0, 3.0, 0.5, 1.4))
    t = interior_grid(d, 30)
    np.testing.assert_allclose(order_stat_pdf(d, 5, 5, t), 5 * d.pdf(t) * d.cdf(t) ** 4, rtol=1e-12)


def test_order_statistic_integrates_to_one():
    d = KwGMODistribution(Exponential(1.3), FamilyParams(2.0, 3.0, 0.7, 1.2))
    assert order_stat_moment(d, 2, 3, 0.0) == pytest.approx(1.0, abs=1e-6)


def test_rank_mixture_identity():
    d = KwGMODistribution(Lomax(3.0, 1.0), FamilyParams(1.4, 0.8, 2.0, 0.9))
    t = interior_grid(d, 50)
    n = 6
    mix = sum(order_stat_pdf(d, i, n, t) for i in range(1, n + 1)) / n
    np.testing.assert_allclose(mix, d.pdf(t), rtol=1e-10)


@pytest.mark.parametrize("i,n", [(1, 3), (2, 3), (3, 3), (2, 5)])
def test_order_statistic_series_matches_standard_form(i, n):
    d = KwGMODistribution(Weibull(0.8, 1.6), FamilyParams(2.0, 3.0, 1.8, 1.1))
    t = interior_grid(d, 60)
    ex = order_stat_expansion(d, i, n)
    np.testing.assert_allclose(ex.pdf(t), order_stat_pdf(d, i, n, t), rtol=1e-10, atol=1e-13)


def test_order_statistic_moment_series_matches_quadrature():
    d = KwGMODistribution(Exponential(1.0), FamilyParams(2.0, 2.0, 1.5, 1.2))
    quad = order_stat_moment(d, 2, 3, 1.0)
    series = order_stat_moment(d, 2, 3, 1.0, method="series")
    assert series == pytest.approx(quad, rel=1e-5)


@pytest.mark.parametrize("i,n", [(0, 3), (4, 3)])
def test_rank_validation(i, n):
    with pytest.raises(IndexError):
        order_stat_pdf(reduced_exponential(), i, n, 1.0)


def test_sample_size_validation():
    with pytest.raises(ValueError):
        order_stat_pdf(reduced_exponential(), 1, 0, 1.0)


# -- probability weighted moments --------------------------------------------
@pytest.mark.parametrize("alpha,theta", [(1.0, 1.0), (0.3, 2.0), (4.0, 0.7)])
def test_pwm_identities(alpha, theta):
    base = Weibull(1.2, 1.8)
    assert pwm_gmo(base, alpha, theta, 0, 0, 0) == pytest.approx(1.0, abs=1e-8)
    assert pwm_gmo(base, alpha, theta, 0, 1, 0) == pytest.approx(0.5, abs=1e-8)
    assert pwm_gmo(base, alpha, theta, 0, 0, 1) == pytest.approx(0.5, abs=1e-8)


def test_pwm_exponential_mean():
    assert pwm_gmo(Exponential(1.0), 1.0, 1.0, 1, 0, 0) == pytest.approx(1.0, rel=1e-9)


# -- moments and mgf ---------------------------------------------------------
def test_exponential_moments():
    d = reduced_exponential()
    assert moment(d, 1) == pytest.approx(1.0, rel=1e-9)
    assert moment(d, 2) == pytest.approx(2.0, rel=1e-9)
    assert moment(d, 1, method="series") == pytest.approx(1.0, rel=1e-9)
    assert moment(d, 0) == 1.0


def test_analytic_subfamily_means():
    # a = 3, b = 1 with alpha = theta = 1 is an exponentiated exponential, mean H_3.
    d = reduced_exponential(a=3.0)
    assert moment(d, 1) == pytest.approx(11.0 / 6.0, rel=1e-9)
    assert moment(d, 1, method="series", form="B") == pytest.approx(11.0 / 6.0, rel=1e-9)
    # a = 1 gives the minimum of b exponentials, mean 1 / (b * lam).
    d = reduced_exponential(2.0, b=3.0)
    assert moment(d, 1) == pytest.approx(1.0 / 6.0, rel=1e-9)


@pytest.mark.parametrize("family", EIGHT_FAMILIES)
def test_moment_series_matches_quadrature(family):
    rng = np.random.default_rng(77 + sum(map(ord, family)))
    for _ in range(2):
        d = integer_model(rng, family)
        if family in ("lomax", "frechet"):
            # Keep the first two moments finite for every mixture component.
            d = d.with_params(theta=max(d.params.theta, 1.5))
            d = KwGMODistribution(type(d.baseline)(3.0, 1.0), d.params)
        for s in (1, 2):
            quad = moment(d, s)
            assert moment(d, s, method="series", form="A") == pytest.approx(quad, rel=1e-6)
            assert moment(d, s, method="series", form="B") == pytest.approx(quad, rel=1e-6)


def test_divergent_moment_detected():
    d = KwGMODistribution(Lomax(2.0, 1.0), FamilyParams())
    with pytest.raises(DivergenceError):
        moment(d, 2)
    d = KwGMODistribution(Frechet(1.0, 1.0), FamilyParams())
    with pytest.raises(DivergenceError):
        moment(d, 1)


def test_mgf_values():
    d = reduced_exponential()
    assert mgf(d, 0.0) == 1.0
    assert mgf(d, 0.5) == pytest.approx(2.0, rel=1e-9)
    with pytest.raises(DivergenceError):
        mgf(d, 1.5)


def test_mgf_series_matches_quadrature():
    d = KwGMODistribution(Exponential(2.0), FamilyParams(2.0, 3.0, 0.6, 1.3))
    assert mgf(d, 0.7, method="series") == pytest.approx(mgf(d, 0.7), rel=1e-6)


def test_method_validated():
    with pytest.raises(ValueError):
        moment(reduced_exponential(), 1, method="simpson")


# -- Renyi entropy -----------------------------------------------------------
def test_renyi_exponential():
    assert renyi_entropy(reduced_exponential(), 2.0) == pytest.approx(math.log(2.0), rel=1e-9)


def test_renyi_scaling():
    base = renyi_entropy(reduced_exponential(1.0), 3.0)
    doubled = renyi_entropy(reduced_exponential(2.0), 3.0)
    assert doubled - base == pytest.approx(-math.log(2.0), abs=1e-6)


@pytest.mark.parametrize("delta", [1.0, 0.0, -2.0])
def test_renyi_order_validated(delta):
    with pytest.raises(ValueError):
        renyi_entropy(reduced_exponential(), delta)


def test_renyi_monotone_in_order(rng):
    for _ in range(4):
        d = integer_model(rng, "weibull")
        values = [renyi_entropy(d, delta) for delta in (0.5, 2.0, 3.0, 5.0)]
        assert all(v2 <= v1 + 1e-9 for v1, v2 in zip(values, values[1:]))


@pytest.mark.parametrize("b,delta", [(2.0, 2.0), (3.0, 2.0), (1.5, 2.0), (1.0, 0.5)])
def test_renyi_series_matches_quadrature(b, delta):
    d = KwGMODistribution(Weibull(1.1, 1.7), FamilyParams(2.0, b, 0.7, 1.2))
    coef = renyi_coefficients(d, delta)
    assert not coef.approximate
    assert renyi_entropy(d, delta, method="series") == pytest.approx(renyi_entropy(d, delta), rel=1e-5)


# -- asymptotes --------------------------------------------------------------
def test_origin_asymptote_exact_for_baseline():
    d = KwGMODistribution(Weibull(1.3, 2.0), FamilyParams())
    t = interior_grid(d, 20)
    np.testing.assert_allclose(asymptote_origin(d, t).pdf, d.baseline.pdf(t), rtol=1e-14)


def test_asymptote_ratios_converge():
    d = KwGMODistribution(Weibull(1.0, 1.5), FamilyParams(1.8, 0.7, 2.5, 1.3))
    base = d.baseline
    levels = 10.0 ** -np.arange(2, 9)
    t0 = base.ppf(levels)
    origin = d.pdf(t0) / asymptote_origin(d, t0).pdf
    t1 = base.isf(levels)
    tail = d.hrf(t1) / asymptote_tail(d, t1).hrf
    for ratios in (origin, tail):
        gaps = np.abs(ratios - 1.0)
        assert np.all(np.diff(gaps) <= 1e-15)
        assert gaps[-3] < 0.01 and gaps[-1] < 0.001
