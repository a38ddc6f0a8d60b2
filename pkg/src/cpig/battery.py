"""
Seeded identity and inequality battery behind ``cpig validate``.

Each case returns a :class:`CaseResult` whose status is ``pass``, ``fail``
or ``reported-only``. Reported-only rows surface a claim that does not hold
as printed (or whose printed form has been superseded) without counting
against the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import bound_suite, cpe_bound, entropy_bound, hardy_bound
from .distributions import Exponential, Power, Uniform, random_piecewise_cdf
from .divergence import (
    MixtureCdf,
    cpig_divergence,
    cpte,
    fcpe,
    jcpig,
    jcpig_mixture_decomposition,
    jcpte,
    jfcpe,
)
from .estimation import (
    clt_experiment,
    empirical_cpig,
    estimator_moments_exponential,
    simulate_estimator_moments,
)
from .measures import (
    cpig,
    cpig_order_statistic,
    cpig_series_partial,
    cpig_theta_derivative,
    cumulative_extropy,
    gcpe,
    gmd,
)
from .orders import convolution_bound_report, convolve_cdfs, cpig_order_check, dispersive_order_check

PASS, FAIL, REPORTED = "pass", "fail", "reported-only"


@dataclass(frozen=True)
class CaseResult:
    index: int
    claim: str
    status: str
    detail: str


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _battery(seed: int, count: int, lower: float | None = None):
    rng = np.random.default_rng([seed, 0xC916])
    return [random_piecewise_cdf(rng, lower=lower) for _ in range(count)]


def _uniform_closed_form(ctx):
    U = Uniform(0, 1)
    worst = 0.0
    for theta, exact in ((0.5, 2 / 3), (1, 0.5), (2, 1 / 3), (5, 1 / 6)):
        closed = cpig(U, theta).value
        quad = cpig(U, theta, method="quadrature").value
        worst = max(worst, abs(quad - exact))
        if closed != exact and abs(closed - exact) > 1e-15:
            return FAIL, f"closed form {closed!r} != {exact!r}"
    return _status(worst <= 1e-8), f"max quadrature error {worst:.3g}"


def _extropy_identity(ctx):
    worst = 0.0
    for F in [Uniform(0, 1), *ctx["battery"]]:
        gap = cpig(F, 2).value + 2 * cumulative_extropy(F, "past").value
        worst = max(worst, abs(gap))
    return _status(worst <= 1e-10), f"max |cpig_2 + 2 cpj| = {worst:.3g}"


def _gcpe_anchors(ctx):
    U = Uniform(0, 1)
    worst = max(abs(gcpe(U, n, method="quadrature").value - 2.0 ** -(n + 1)) for n in range(1, 6))
    exp_err = abs(gcpe(Exponential(1), 1).value - (math.pi ** 2 / 6 - 1))
    return _status(worst <= 1e-9 and exp_err <= 1e-6), \
        f"uniform max error {worst:.3g}, exponential error {exp_err:.3g}"


def _derivatives(ctx):
    U = Uniform(0, 1)
    d1 = cpig_theta_derivative(U, 1, 1).value
    d2 = cpig_theta_derivative(U, 1, 2).value
    return _status(abs(d1 + 0.25) <= 1e-5 and abs(d2 - 0.25) <= 1e-3), f"d1={d1:.8f} d2={d2:.6f}"


def _series(ctx):
    U = Uniform(0, 1)
    worst = max(abs(cpig_series_partial(U, t, 40).value - 1 / (t + 1)) for t in (0.5, 1.5))
    return _status(worst <= 1e-8), f"max error {worst:.3g}"


def _gmd_identity(ctx):
    worst = 0.0
    for F in [Uniform(0, 1), *ctx["battery"]]:
        gap = cpig(F, 1).value - cpig(F, 2).value - gmd(F).value / 2
        worst = max(worst, abs(gap))
    return _status(worst <= 1e-8), f"max gap {worst:.3g}"


def _order_statistics(ctx):
    worst = -math.inf
    for F in [Uniform(0, 1), *ctx["battery"]]:
        for theta in (0.5, 1, 2):
            base = cpig(F, theta).value
            for n in (2, 3, 5):
                worst = max(worst, cpig_order_statistic(F, n, theta).value - base)
    return _status(worst <= 1e-12), f"max excess {worst:.3g}"


def _dispersive(ctx):
    rng = np.random.default_rng([ctx["seed"], 8])
    for _ in range(10):
        a, b = np.sort(rng.uniform(0.1, 5.0, 2))
        X, Y = Uniform(0, a), Uniform(0, b)
        if not dispersive_order_check(X, Y).holds or not cpig_order_check(X, Y, (0.5, 1, 2, 5)).holds:
            return FAIL, f"pair a={a:.4g} b={b:.4g}"
    return PASS, "10 uniform pairs"


def _convolution_additivity(ctx):
    U = Uniform(0, 1)
    lhs = cpig(convolve_cdfs(U, U), 1).value
    return _status(abs(lhs - 1.0) <= 5e-3), f"cpig(U+U, 1) = {lhs:.6f}, sum of parts = 1"


def _convolution_claim(ctx):
    r = convolution_bound_report(Uniform(0, 1), Uniform(0, 1), 1)
    return REPORTED, f"lhs={r.lhs:.6f} {r.relation} rhs={r.rhs:.6f} holds={str(r.holds).lower()}"


def _bounds(ctx):
    worst = math.inf
    for F in ctx["battery_bounds"]:
        for theta in (0.5, 1, 2, 3):
            for rep in bound_suite(F, theta):
                if rep.applicable:
                    worst = min(worst, rep.slack)
    U = Uniform(0, 1)
    spots = (entropy_bound(U, 1).rhs, cpe_bound(U, 2).rhs, hardy_bound(U, 2).rhs)
    ok = worst >= -1e-9 and abs(spots[0] - math.exp(-1)) < 1e-9 and abs(spots[2] - 1 / 48) < 1e-9
    return _status(ok), f"min slack {worst:.3g}; U(0,1) rhs = " + ", ".join(f"{s:.4f}" for s in spots)


def _estimator(ctx):
    hand = empirical_cpig([1, 3, 4], 1)
    rng = np.random.default_rng([ctx["seed"], 11])
    x = rng.random(10_000)
    worst = max(abs(empirical_cpig(x, t) - 1 / (t + 1)) for t in (1, 2))
    return _status(hand == 4 / 3 and worst <= 0.05), f"hand value {hand!r}, n=1e4 error {worst:.3g}"


def _moments(ctx):
    exact = estimator_moments_exponential(50, 1.0, 2)
    mc = ctx["mc"]
    return _status(abs(mc.mean - exact.mean) <= 3 * mc.mean_se), \
        f"mc mean {mc.mean:.5f} +- {mc.mean_se:.5f}, formula {exact.mean:.5f}"


def _variance_corrected(ctx):
    exact = estimator_moments_exponential(50, 1.0, 2)
    rel = abs(ctx["mc"].variance / exact.variance_corrected - 1)
    return _status(rel <= 0.10), f"mc variance {ctx['mc'].variance:.4f}, independent-spacing {exact.variance_corrected:.4f}"


def _variance_printed(ctx):
    exact = estimator_moments_exponential(50, 1.0, 2)
    return REPORTED, f"printed variance {exact.variance_paper:.4f} vs mc {ctx['mc'].variance:.4f}"


def _clt(ctx):
    r = clt_experiment(Exponential(1), 500, 2, 2000, ctx["seed"])
    ok = r.ks_distance <= 0.05 and abs(r.standardized_mean) <= 0.07 and 0.85 <= r.standardized_variance <= 1.15
    return _status(ok), (f"ks={r.ks_distance:.4f} mean={r.standardized_mean:.4f} "
                         f"var={r.standardized_variance:.4f}")


def _divergence_values(ctx):
    U, P = Uniform(0, 1), Power(2)
    M = MixtureCdf([U, P], [0.5, 0.5])
    du = cpig_divergence(U, M, 2).value
    dp = cpig_divergence(P, M, 2).value
    j = jcpig([U, P], [0.5, 0.5], 2).value
    ok = abs(du - 0.030922) <= 1e-4 and abs(dp - 0.019085) <= 1e-4 and abs(j - 1 / 120) <= 1e-8
    return _status(ok), f"D(U)={du:.6f} D(P)={dp:.6f} jcpig={j:.10f}"


def _decomposition(ctx):
    left, right = jcpig_mixture_decomposition([Uniform(0, 1), Power(2)], [0.5, 0.5], 2)
    return REPORTED, f"jcpig={left:.6f} weighted divergence={right:.6f}"


def _jensen(ctx):
    rng = np.random.default_rng([ctx["seed"], 15])
    worst = math.inf
    comps = ctx["battery"]
    for k in range(0, len(comps) - 1, 2):
        pair = comps[k:k + 2]
        w = rng.random()
        weights = [w, 1 - w]
        for theta in (0.5, 2):
            worst = min(worst, jcpig(pair, weights, theta).value)
        for q in (0.5, 1.0):
            worst = min(worst, jfcpe(pair, weights, q).value, jcpte(pair, weights, q).value)
    fv = fcpe(Uniform(0, 1), 0.5).value
    cv = cpte(Uniform(0, 1), 2).value
    ok = worst >= -1e-9 and abs(fv - 0.313329) <= 1e-6 and abs(cv - 2 / 9) <= 1e-8
    return _status(ok), f"min gap {worst:.3g}, fcpe={fv:.6f}, cpte={cv:.10f}"


def _location(ctx):
    worst = 0.0
    for F in ctx["battery"]:
        G = F.shifted(3.7)
        for n in (1, 2, 3):
            for theta in (0.5, 2):
                worst = max(worst, abs(cpig_order_statistic(F, n, theta).value
                                       - cpig_order_statistic(G, n, theta).value))
    return _status(worst < 1e-10), f"max change {worst:.3g}"


CASES: tuple[tuple[str, Callable], ...] = (
    ("cpig of Uniform(0,1) equals (b-a)/(theta+1)", _uniform_closed_form),
    ("cpig_2 + 2 cpj = 0", _extropy_identity),
    ("gcpe anchors", _gcpe_anchors),
    ("theta-derivatives at 1 give -cpe and 2 gcpe_2", _derivatives),
    ("series in (1-theta) converges to cpig", _series),
    ("cpig_1 - cpig_2 = gmd / 2", _gmd_identity),
    ("cpig of the maximum is at most cpig", _order_statistics),
    ("dispersive order implies cpig order", _dispersive),
    ("cpig_1 is additive under convolution", _convolution_additivity),
    ("cpig(X+Y) <= min(cpig(X), cpig(Y)) for theta >= 1", _convolution_claim),
    ("entropy, cpe and Hardy lower bounds", _bounds),
    ("empirical estimator", _estimator),
    ("exponential estimator mean formula", _moments),
    ("exponential estimator variance with squared weights", _variance_corrected),
    ("exponential estimator variance as printed", _variance_printed),
    ("asymptotic normality of the estimator", _clt),
    ("divergence and jcpig reference values", _divergence_values),
    ("jcpig = sum p_i D(F_i, mixture)", _decomposition),
    ("Jensen gaps are nonnegative", _jensen),
    ("cpig of order statistics is location invariant", _location),
)


def run_battery(seed: int, battery_size: int = 12) -> list[CaseResult]:
    """Run every case in order; a case that raises is recorded as a failure."""
    ctx = {
        "seed": seed,
        "battery": _battery(seed, battery_size),
        "battery_bounds": _battery(seed + 1, battery_size),
        "mc": simulate_estimator_moments(Exponential(1), 50, 2, 5000, seed),
    }
    results = []
    for index, (claim, fn) in enumerate(CASES, start=1):
        try:
            status, detail = fn(ctx)
        except Exception as exc:  # noqa: BLE001 - surfaced as a failed row
            status, detail = FAIL, f"{type(exc).__name__}: {exc}"
        results.append(CaseResult(index, claim, status, detail))
    return results
