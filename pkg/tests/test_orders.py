import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpig import (
    Exponential,
    MonotoneTransform,
    NoDensity,
    OrderReport,
    Power,
    Uniform,
    convolution_bound_report,
    convolve_cdfs,
    cpig,
    cpig_order_check,
    dispersive_order_check,
    empirical_cdf_spec,
    fold_convolve,
    make_piecewise_cdf,
    narrow_uniform_cdf,
    stochastic_order_check,
    transformed_cpig_order_check,
)
from cpig.errors import UnboundedSupport
from cpig.orders import convolution_bound_report_many

from conftest import random_cdfs


def test_report_invariant():
    with pytest.raises(ValueError):
        OrderReport(True, 3, (0.0, 1.0, 2.0))
    with pytest.raises(ValueError):
        OrderReport(False, 3, None)


def test_dispersive_uniforms():
    assert dispersive_order_check(Uniform(0, 1), Uniform(0, 2)).holds
    rep = dispersive_order_check(Uniform(0, 2), Uniform(0, 1))
    assert not rep.holds
    t, lhs, rhs = rep.witness
    assert lhs == pytest.approx(0.5) and rhs == pytest.approx(1.0)


def test_dispersive_exponentials():
    # a larger rate means less dispersion
    assert dispersive_order_check(Exponential(2), Exponential(1)).holds
    assert not dispersive_order_check(Exponential(1), Exponential(2)).holds


def test_dispersive_needs_density():
    with pytest.raises(NoDensity):
        dispersive_order_check(empirical_cdf_spec([1, 2, 3]), Uniform(0, 1))


def test_stochastic_order():
    assert stochastic_order_check(Uniform(0, 1), Power(2)).holds
    rep = stochastic_order_check(Power(2), Uniform(0, 1))
    assert not rep.holds
    x, lhs, rhs = rep.witness
    assert lhs < rhs


def test_stochastic_order_is_reflexive_on_battery(battery):
    for F in battery[:10]:
        assert stochastic_order_check(F, F).holds


def test_cpig_order_check():
    assert cpig_order_check(Uniform(0, 1), Uniform(0, 3), [0.5, 1, 2]).holds
    rep = cpig_order_check(Uniform(0, 3), Uniform(0, 1), [0.5, 1, 2])
    assert not rep.holds and rep.witness[0] == 0.5


@given(st.floats(0.1, 5), st.floats(0.1, 5))
def test_dispersive_implies_cpig_order(a, b):
    a, b = sorted((a, b))
    X, Y = Uniform(0, a), Uniform(0, b)
    if dispersive_order_check(X, Y).holds:
        assert cpig_order_check(X, Y, [0.5, 1, 2, 5]).holds


def test_transformed_order():
    phi = MonotoneTransform(lambda x: math.exp(x), lambda x: math.exp(x))
    assert transformed_cpig_order_check(Uniform(0, 1), Uniform(0, 1), phi, [1, 2]).holds


def test_convolution_of_uniforms_is_triangular():
    T = convolve_cdfs(Uniform(0, 1), Uniform(0, 1))
    assert T.cdf(1.0) == pytest.approx(0.5, abs=1e-6)
    assert T.cdf(0.5) == pytest.approx(0.125, abs=1e-5)
    assert T.cdf(1.5) == pytest.approx(0.875, abs=1e-5)
    assert T.support.lower == 0.0 and T.support.upper == 2.0


@settings(max_examples=10)
@given(random_cdfs, random_cdfs)
def test_convolution_additivity_at_theta_one(F, G):
    T = convolve_cdfs(F, G)
    assert cpig(T, 1).value == pytest.approx(cpig(F, 1).value + cpig(G, 1).value, abs=5e-3)


def test_convolution_with_near_point_mass_is_a_shift():
    T = convolve_cdfs(narrow_uniform_cdf(2.0), Uniform(0, 1))
    assert T.cdf(2.5) == pytest.approx(0.5, abs=1e-4)
    assert cpig(T, 2).value == pytest.approx(1 / 3, abs=1e-3)


def test_convolution_needs_bounded_support():
    with pytest.raises(UnboundedSupport):
        convolve_cdfs(Exponential(1), Uniform(0, 1))


def test_fold_convolve_three_uniforms():
    T = fold_convolve([Uniform(0, 1)] * 3, grid_size=1024)
    # Irwin-Hall: F(1) = 1/6
    assert T.cdf(1.0) == pytest.approx(1 / 6, abs=1e-4)
    with pytest.raises(ValueError):
        fold_convolve([])


def test_convolution_claim_report():
    rep = convolution_bound_report(Uniform(0, 1), Uniform(0, 1), 1)
    assert rep.relation == "<="
    assert rep.lhs == pytest.approx(1.0, abs=5e-3)
    assert rep.rhs == 0.5
    assert rep.holds is False
    assert convolution_bound_report(Uniform(0, 1), Uniform(0, 1), 0.5).relation == ">="


def test_convolution_claim_many():
    rep = convolution_bound_report_many([Uniform(0, 1)] * 3, 1, grid_size=1024)
    assert rep.lhs == pytest.approx(1.5, abs=5e-3)
    assert rep.holds is False
