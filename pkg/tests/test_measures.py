import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cpig import (
    Divergent,
    DomainError,
    Exponential,
    MeasureResult,
    MonotoneTransform,
    NoDensity,
    NonMonotone,
    Power,
    SeriesDivergenceWarning,
    Uniform,
    cigf,
    cpe,
    cpig,
    cpig_order_statistic,
    cpig_series_partial,
    cpig_theta_derivative,
    cpig_transformed,
    cre,
    crig,
    cumulative_extropy,
    empirical_cdf_spec,
    gcpe,
    gcre,
    gmd,
    make_piecewise_cdf,
    order_stat_cpig_ratio,
    order_stat_mean,
    rcpig,
    shannon_entropy,
)

from conftest import random_cdfs, thetas


def mp_piecewise_integral(F, g):
    """Oracle: integral of g(F(x)) over F's knots, segment by segment, with mpmath."""
    total = mp.mpf(0)
    for (x0, p0), (x1, p1) in zip(F.knots[:-1], F.knots[1:]):
        if x0 >= F.support.upper:
            break  # the CDF is 1 from here on, outside the support
        slope = (mp.mpf(p1) - p0) / (mp.mpf(x1) - x0)
        total += mp.quad(lambda x: g(p0 + slope * (x - x0)), [x0, x1])
    return float(total)


def test_result_invariants():
    with pytest.raises(ValueError):
        MeasureResult(1.0, -1.0, "quadrature")
    with pytest.raises(ValueError):
        MeasureResult(1.0, 0.0, "quadrature")
    with pytest.raises(ValueError):
        MeasureResult(1.0, 0.1, "guess")
    assert float(MeasureResult(2.0, 0.0, "closed-form")) == 2.0


@pytest.mark.parametrize("theta", [0.5, 1, 2, 5])
def test_uniform_closed_form(theta):
    r = cpig(Uniform(1, 4), theta)
    assert r.method == "closed-form" and r.abs_err == 0.0
    assert r.value == 3 / (theta + 1)
    q = cpig(Uniform(1, 4), theta, method="quadrature")
    assert q.method == "quadrature"
    assert q.value == pytest.approx(3 / (theta + 1), abs=1e-9)


def test_power_closed_form_and_quadrature_agree():
    P = Power(2.5)
    assert cpig(P, 1.5).value == pytest.approx(cpig(P, 1.5, method="quadrature").value, abs=1e-9)


@pytest.mark.parametrize("theta", [0, -1, math.nan, math.inf])
def test_theta_must_be_positive(theta):
    with pytest.raises(DomainError):
        cpig(Uniform(0, 1), theta)


def test_unknown_method():
    with pytest.raises(DomainError):
        cpig(Uniform(0, 1), 1, method="fast")


def test_unbounded_support_diverges():
    with pytest.raises(Divergent):
        cpig(Exponential(1), 1)
    with pytest.raises(Divergent):
        cumulative_extropy(Exponential(1), "past")


@given(random_cdfs, thetas)
def test_cpig_matches_mpmath(F, theta):
    exact = mp_piecewise_integral(F, lambda u: u ** theta if u > 0 else mp.mpf(0))
    r = cpig(F, theta)
    assert r.value == pytest.approx(exact, abs=1e-9)


@given(random_cdfs, thetas, thetas)
def test_cpig_decreasing_in_theta(F, a, b):
    lo, hi = sorted((a, b))
    assert cpig(F, hi).value <= cpig(F, lo).value + 1e-12


@given(random_cdfs)
def test_cpig_at_one_is_integral_of_F(F):
    assert cpig(F, 1).value == pytest.approx(gcpe(F, 0).value, abs=1e-12)
    assert cpig(F, 1).value <= F.support.width + 1e-12


@pytest.mark.parametrize("n", range(0, 6))
def test_gcpe_power_family(n):
    c = 2.0
    assert gcpe(Power(c), n).value == pytest.approx(c ** n / (c + 1) ** (n + 1), abs=1e-10)


def test_gcpe_exponential_series_oracle():
    oracle = float(mp.nsum(lambda k: 1 / k ** 2, [2, mp.inf]))
    assert gcpe(Exponential(1), 1).value == pytest.approx(oracle, abs=1e-9)


@pytest.mark.parametrize("n", range(0, 5))
@pytest.mark.parametrize("rate", [0.5, 2.0])
def test_gcre_exponential_is_mean(n, rate):
    assert gcre(Exponential(rate), n).value == pytest.approx(1 / rate, rel=1e-8)


def test_cpe_cre_aliases():
    U = Uniform(0, 1)
    assert cpe(U).value == 0.25
    assert cre(Exponential(3)).value == pytest.approx(1 / 3, rel=1e-9)


def test_order_must_be_nonnegative_integer():
    with pytest.raises(DomainError):
        gcpe(Uniform(0, 1), -1)
    with pytest.raises(DomainError):
        gcpe(Uniform(0, 1), 1.5)


@pytest.mark.parametrize("alpha, beta", [(1, 1), (2, 0.5), (0.5, 3)])
def test_cigf_is_beta_function_on_uniform(alpha, beta):
    assert cigf(Uniform(0, 1), alpha, beta).value == pytest.approx(
        float(mp.beta(alpha + 1, beta + 1)), abs=1e-9)


def test_cigf_edges():
    assert cigf(Uniform(0, 1), 2, 0).value == pytest.approx(1 / 3, abs=1e-12)
    with pytest.raises(DomainError):
        cigf(Uniform(0, 1), 0, 0)
    with pytest.raises(Divergent):
        cigf(Exponential(1), 1, 0)


def test_crig_exponential():
    assert crig(Exponential(2), 1.5).value == pytest.approx(1 / 3, rel=1e-9)


def test_rcpig():
    U, P = Uniform(0, 1), Power(2)
    assert rcpig(U, P, 1).value == pytest.approx(0.25, abs=1e-12)
    assert rcpig(U, U, 2).value == pytest.approx(cpig(U, 4).value, abs=1e-12)
    with pytest.raises(Divergent):
        rcpig(Exponential(1), U, 1)


def test_extropy_and_gmd_closed_forms():
    U = Uniform(0, 3)
    assert cumulative_extropy(U, "past").value == -0.5
    assert cumulative_extropy(U, "residual").value == -0.5
    assert gmd(U).value == 1.0
    with pytest.raises(DomainError):
        cumulative_extropy(U, "future")


def test_gmd_exponential():
    assert gmd(Exponential(2)).value == pytest.approx(0.5, rel=1e-9)


@given(random_cdfs)
def test_gmd_is_mean_absolute_difference(F):
    rng = np.random.default_rng(0)
    # crude Monte Carlo cross-check of E|X - X'|
    x = F.sample(40_000, seed=1)
    y = F.sample(40_000, seed=2)
    assert gmd(F).value == pytest.approx(np.mean(np.abs(x - y)), rel=0.05, abs=0.01)


def test_entropy():
    assert shannon_entropy(Uniform(0, 2)).value == pytest.approx(math.log(2), abs=1e-12)
    assert shannon_entropy(Exponential(2)).value == pytest.approx(1 - math.log(2), abs=1e-9)
    with pytest.raises(NoDensity):
        shannon_entropy(empirical_cdf_spec([1, 2]))


def test_series_matches_cpig_for_convergent_theta():
    F = make_piecewise_cdf([(0, 0), (1, 0.4), (3, 1)])
    for theta in (0.6, 1.4):
        assert cpig_series_partial(F, theta, 40).value == pytest.approx(cpig(F, theta).value, abs=1e-8)


def test_series_warns_when_terms_grow():
    with pytest.warns(SeriesDivergenceWarning):
        cpig_series_partial(Uniform(0, 1), 4.0, 10)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        cpig_series_partial(Uniform(0, 1), 0.5, 10)


def test_series_at_theta_one_is_first_term():
    r = cpig_series_partial(Uniform(0, 2), 1.0, 10)
    assert r.value == 1.0


@pytest.mark.parametrize("n, expected, tol", [(1, -0.25, 1e-6), (2, 0.25, 1e-5), (3, -0.375, 1e-3)])
def test_theta_derivatives_uniform(n, expected, tol):
    r = cpig_theta_derivative(Uniform(0, 1), 1.0, n)
    assert r.value == pytest.approx(expected, abs=tol)
    assert r.abs_err < 10 * tol


@given(random_cdfs)
def test_first_derivative_at_one_is_minus_cpe(F):
    d = cpig_theta_derivative(F, 1.0, 1).value
    assert d == pytest.approx(-cpe(F).value, abs=1e-6)


def test_derivative_rejects_small_theta():
    with pytest.raises(DomainError):
        cpig_theta_derivative(Uniform(0, 1), 1e-4, 1)


def test_order_statistics():
    U = Uniform(0, 1)
    assert cpig_order_statistic(U, 3, 2).value == pytest.approx(1 / 7)
    assert cpig_order_statistic(U, 1, 2).value == cpig(U, 2).value
    assert order_stat_mean(U, 4).value == pytest.approx(0.8, abs=1e-12)
    assert order_stat_cpig_ratio(U, 4, 1).value == pytest.approx((1 / 5) / 0.8, abs=1e-12)
    with pytest.raises(DomainError):
        cpig_order_statistic(U, 0, 1)
    with pytest.raises(DomainError):
        order_stat_mean(Uniform(-1, 1), 2)


def test_order_stat_mean_shifted_support():
    assert order_stat_mean(Uniform(2, 3), 1).value == pytest.approx(2.5, abs=1e-12)


def test_transformed_cpig_square_map():
    phi = MonotoneTransform(lambda x: x * x, lambda x: 2 * x)
    # X^2 has CDF sqrt(y) on (0, 1)
    for theta in (0.5, 2.0):
        assert cpig_transformed(Uniform(0, 1), phi, theta).value == pytest.approx(1 / (theta / 2 + 1), abs=1e-9)


def test_transformed_cpig_rejects_decreasing_map():
    phi = MonotoneTransform(lambda x: -x, lambda x: -1.0)
    with pytest.raises(NonMonotone):
        cpig_transformed(Uniform(0, 1), phi, 1)


@given(random_cdfs, thetas, st.floats(0.2, 5.0))
def test_scale_equivariance(F, theta, s):
    assert cpig(F.scaled(s), theta).value == pytest.approx(s * cpig(F, theta).value, rel=1e-9, abs=1e-12)
