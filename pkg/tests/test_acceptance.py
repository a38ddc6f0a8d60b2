"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import math

import mpmath as mp
import numpy as np
import pytest

from cpig import (
    Exponential,
    MixtureCdf,
    Power,
    Uniform,
    bound_suite,
    clt_experiment,
    convolution_bound_report,
    convolve_cdfs,
    cpe_bound,
    cpig,
    cpig_divergence,
    cpig_order_check,
    cpig_order_statistic,
    cpig_series_partial,
    cpig_theta_derivative,
    cpte,
    cumulative_extropy,
    dispersive_order_check,
    empirical_cpig,
    entropy_bound,
    estimator_moments_exponential,
    fcpe,
    gcpe,
    gmd,
    hardy_bound,
    jcpig,
    jcpig_mixture_decomposition,
    jcpte,
    jfcpe,
    simulate_estimator_moments,
)
from cpig.battery import run_battery

from conftest import ACCEPTANCE_LINES

U = Uniform(0, 1)
MC_SEED = 11
CLT_SEED = 7


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} | {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def validate_rows():
    return {r.claim: r for r in run_battery(1)}


def test_01_closed_form_cpig():
    cases = {0.5: 2 / 3, 1: 1 / 2, 2: 1 / 3, 5: 1 / 6}
    exact = all(cpig(U, t).value == v and cpig(U, t).method == "closed-form" for t, v in cases.items())
    quad = max(abs(cpig(U, t, method="quadrature").value - v) for t, v in cases.items())
    record(1, exact and quad <= 1e-8, f"closed form exact={exact}, quadrature max error {quad:.2e}")


def test_02_extropy_identity(battery):
    worst = max(abs(cpig(F, 2).value + 2 * cumulative_extropy(F, "past").value) for F in [U, *battery])
    cpj = cumulative_extropy(U, "past").value
    record(2, worst <= 1e-10 and cpj == -1 / 6, f"cpj(U)={cpj:.6f}, max |cpig_2 + 2 cpj| over 101 CDFs {worst:.2e}")


def test_03_gcpe_anchors():
    uni = max(abs(gcpe(U, n, method="quadrature").value - 2.0 ** -(n + 1)) for n in range(1, 6))
    closed = max(abs(gcpe(U, n).value - 2.0 ** -(n + 1)) for n in range(1, 6))
    oracle = float(mp.nsum(lambda k: 1 / k ** 2, [1, mp.inf])) - 1
    exp_err = abs(gcpe(Exponential(1), 1).value - oracle)
    record(3, max(uni, closed) <= 1e-9 and exp_err <= 1e-6,
           f"uniform n=1..5 max error {max(uni, closed):.2e}, Exp(1) error vs series {exp_err:.2e}")


def test_04_derivative_identities():
    d1 = cpig_theta_derivative(U, 1, 1).value
    d2 = cpig_theta_derivative(U, 1, 2).value
    record(4, abs(d1 + 0.25) <= 1e-5 and abs(d2 - 0.25) <= 1e-3,
           f"d1={d1:.9f} (|err| {abs(d1 + 0.25):.1e}), d2={d2:.7f} (|err| {abs(d2 - 0.25):.1e})")


def test_05_series_representation():
    errs = {t: abs(cpig_series_partial(U, t, 40).value - 1 / (t + 1)) for t in (0.5, 1.5)}
    record(5, max(errs.values()) <= 1e-8, ", ".join(f"theta={t}: error {e:.2e}" for t, e in errs.items()))


def test_06_gmd_identity(battery):
    slack = cpig(U, 1).value - cpig(U, 2).value
    worst = max(abs(cpig(F, 1).value - cpig(F, 2).value - gmd(F).value / 2) for F in [U, *battery])
    record(6, worst <= 1e-8 and abs(slack - 1 / 6) <= 1e-12,
           f"U(0,1) slack {slack:.6f}, max identity gap over 101 CDFs {worst:.2e}")


def test_07_order_statistic_inequality(battery):
    excess, strict, n1 = -math.inf, True, 0.0
    for F in [U, *battery]:
        for theta in (0.5, 1, 2):
            base = cpig(F, theta).value
            n1 = max(n1, abs(cpig_order_statistic(F, 1, theta).value - base))
            for n in (2, 3, 5):
                gap = cpig_order_statistic(F, n, theta).value - base
                excess = max(excess, gap)
                strict = strict and gap < 0
    record(7, excess <= 0 and strict and n1 == 0.0,
           f"max cpig(max of n) - cpig {excess:.3e} (strict for n>=2: {strict}), n=1 difference {n1}")


def test_08_dispersive_implies_cpig_order():
    rng = np.random.default_rng(8)
    failures = 0
    for _ in range(50):
        a, b = np.sort(rng.uniform(0.05, 10.0, 2))
        X, Y = Uniform(0, a), Uniform(0, b)
        ok = dispersive_order_check(X, Y).holds and cpig_order_check(X, Y, (0.5, 1, 2, 5)).holds
        failures += not ok
    record(8, failures == 0, f"{50 - failures}/50 uniform pairs satisfy both checks")


def test_09_convolution_report(validate_rows):
    rep = convolution_bound_report(U, U, 1)
    additive = abs(cpig(convolve_cdfs(U, U), 1).value - (cpig(U, 1).value + cpig(U, 1).value))
    row = validate_rows["cpig(X+Y) <= min(cpig(X), cpig(Y)) for theta >= 1"]
    ok = (abs(rep.lhs - 1.0) <= 5e-3 and rep.rhs == 0.5 and additive <= 5e-3
          and row.status == "reported-only" and "holds=false" in row.detail and rep.holds is False)
    record(9, ok, f"lhs={rep.lhs:.5f}, rhs={rep.rhs}, additivity gap {additive:.1e}, validate row {row.status}")


def test_10_bounds_battery(bounds_battery):
    worst = math.inf
    for F in bounds_battery:
        for theta in (0.5, 1, 1.5, 2, 3):
            for rep in bound_suite(F, theta):
                if rep.applicable:
                    worst = min(worst, rep.slack)
    i, ii, iii = entropy_bound(U, 1), cpe_bound(U, 2), hardy_bound(U, 2)
    spots = (
        i.lhs == 0.5 and abs(i.rhs - 0.3679) < 5e-5
        and abs(ii.lhs - 1 / 3) < 1e-12 and abs(ii.rhs - 0.3033) < 5e-5
        and abs(iii.lhs - 1 / 3) < 1e-12 and abs(iii.rhs - 1 / 48) < 1e-10
    )
    record(10, worst >= -1e-9 and spots,
           f"min slack over 200 CDFs x 5 thetas {worst:.3e}; spots {i.rhs:.4f}, {ii.rhs:.4f}, {iii.rhs:.6f}")


def test_11_estimator():
    hand = empirical_cpig([1, 3, 4], 1)
    x = U.sample(10_000, seed=2024)
    errs = [abs(empirical_cpig(x, t) - 1 / (t + 1)) for t in (1, 2)]
    record(11, hand == 4 / 3 and max(errs) <= 0.05, f"hand value {hand!r}, n=1e4 errors {errs[0]:.4f}, {errs[1]:.4f}")


def test_12_exponential_moments():
    exact = estimator_moments_exponential(50, 1.0, 2)
    mc = simulate_estimator_moments(Exponential(1), 50, 2, 5000, MC_SEED)
    z = abs(mc.mean - exact.mean) / mc.mean_se
    near_corrected = abs(mc.variance / exact.variance_corrected - 1)
    from_paper = abs(mc.variance / exact.variance_paper - 1)
    ok = z <= 3 and near_corrected <= 0.10 and from_paper > 0.10
    record(12, ok, f"mean z={z:.2f}; var {mc.variance:.4f} vs corrected {exact.variance_corrected:.4f} "
                   f"({near_corrected:.1%}), vs printed {exact.variance_paper:.4f} ({from_paper:.1%}, needs >10%)")


def test_13_clt():
    r = clt_experiment(Exponential(1), 500, 2, 2000, CLT_SEED)
    ok = r.ks_distance <= 0.05 and abs(r.standardized_mean) <= 0.07 and 0.85 <= r.standardized_variance <= 1.15
    record(13, ok, f"ks={r.ks_distance:.4f} (needs <=0.05), mean={r.standardized_mean:.4f}, "
                   f"variance={r.standardized_variance:.4f}")


def test_14_divergence_oracles(validate_rows):
    M = MixtureCdf([U, Power(2)], [0.5, 0.5])
    du = cpig_divergence(U, M, 2).value
    dp = cpig_divergence(Power(2), M, 2).value
    j = jcpig([U, Power(2)], [0.5, 0.5], 2).value
    left, right = jcpig_mixture_decomposition([U, Power(2)], [0.5, 0.5], 2)
    row = validate_rows["jcpig = sum p_i D(F_i, mixture)"]
    ok = (abs(du - 0.030922) <= 1e-4 and abs(dp - 0.019085) <= 1e-4 and abs(j - 1 / 120) <= 1e-8
          and abs(left - 0.008333) <= 1e-4 and abs(right - 0.025003) <= 1e-4 and row.status == "reported-only")
    record(14, ok, f"D(U)={du:.6f}, D(P)={dp:.6f}, jcpig={j:.10f}, decomposition=({left:.6f}, {right:.6f}), "
                   f"validate row {row.status}")


def test_15_jensen_nonnegativity(battery):
    rng = np.random.default_rng(15)
    worst = {"jcpig": math.inf, "jfcpe": math.inf, "jcpte": math.inf}
    worst_q = None
    for k in range(0, len(battery) - 1, 2):
        pair = battery[k:k + 2]
        w = float(rng.random())
        weights = [w, 1 - w]
        for theta in (0.5, 1, 2, 4):
            worst["jcpig"] = min(worst["jcpig"], jcpig(pair, weights, theta).value)
        for q in (0.25, 0.5, 1.0):
            worst["jfcpe"] = min(worst["jfcpe"], jfcpe(pair, weights, q).value)
            v = jcpte(pair, weights, q).value
            if v < worst["jcpte"]:
                worst["jcpte"], worst_q = v, q
    fv = fcpe(U, 0.5).value
    cv = cpte(U, 2).value
    ok = min(worst.values()) >= -1e-9 and abs(fv - 0.313329) <= 1e-6 and abs(cv - 2 / 9) <= 1e-8
    record(15, ok, ", ".join(f"min {k} {v:.3e}" for k, v in worst.items())
           + f" (jcpte worst at q={worst_q}); fcpe={fv:.6f}, cpte={cv:.9f}")


def test_16_location_invariance(battery):
    worst = 0.0
    for F in battery:
        G = F.shifted(3.7)
        for n in (1, 2, 3):
            for theta in (0.5, 1, 2):
                worst = max(worst, abs(cpig_order_statistic(G, n, theta).value
                                       - cpig_order_statistic(F, n, theta).value))
    record(16, worst < 1e-10, f"max change under shift 3.7 over 100 CDFs {worst:.2e}")
