"""
Divergence and Jensen-type measures over finite mixtures of CDFs.

Contents: the generalised logarithm ``generalized_log``; the CPIG
divergence ``cpig_divergence`` between two CDFs; Jensen gaps of CPIG
(``jcpig``), of fractional cumulative past entropy (``jfcpe``) and of
cumulative past Taneja entropy (``jcpte``); and a two-sided report of the
mixture decomposition of JCPIG into weighted divergences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import Distribution, SupportInterval
from .errors import DomainError, NoDensity, RatioSingularity
from .measures import (
    QUADRATURE,
    MeasureResult,
    check_theta,
    cpig,
    integrate_over,
    xlog_power,
)
from .numerics import DEFAULT_TOL

WEIGHT_TOL = 1e-12
# below this distance from 1 the divergence switches to the log branch
LOG_BRANCH = 1e-6
# F mass tolerated where G vanishes before the ratio is declared singular
RATIO_MASS = 1e-12


@dataclass(frozen=True)
class MixWeights:
    """Nonnegative weights summing to 1."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(w) for w in self.values)
        if not vals:
            raise DomainError("need at least one weight")
        if any(not math.isfinite(w) or w < 0 for w in vals):
            raise DomainError(f"weights must be finite and nonnegative, got {vals}")
        if abs(math.fsum(vals) - 1.0) > WEIGHT_TOL:
            raise DomainError(f"weights must sum to 1, got {math.fsum(vals)!r}")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def _weights(weights) -> MixWeights:
    return weights if isinstance(weights, MixWeights) else MixWeights(tuple(weights))


class MixtureCdf(Distribution):
    """F_T(x) = sum_i p_i F_i(x)."""

    def __init__(self, components: Sequence[Distribution], weights):
        weights = _weights(weights)
        if len(components) != len(weights):
            raise DomainError("components and weights differ in length")
        self.components = tuple(components)
        self.weights = weights
        self._w = np.asarray(weights.values)
        self.has_density = all(c.has_density for c in self.components)

    def __repr__(self):
        return f"MixtureCdf(components={self.components!r}, weights={self.weights.values!r})"

    @property
    def support(self):
        active = [c.support for c, w in zip(self.components, self._w) if w > 0]
        return SupportInterval(min(s.lower for s in active), max(s.upper for s in active))

    def _mix(self, attr, x):
        out = np.zeros_like(x)
        for c, w in zip(self.components, self._w):
            if w > 0:
                out = out + w * getattr(c, attr)(x)
        return out

    def _cdf(self, x):
        return self._mix("_cdf", x)

    def _sf(self, x):
        return self._mix("_sf", x)

    def _pdf(self, x):
        if not self.has_density:
            raise NoDensity("a mixture component has no density")
        return self._mix("_pdf", x)

    def _ppf(self, p):
        # bisection on the monotone CDF, vectorised over p
        p = np.asarray(p, dtype=float)
        lo = np.full(p.shape, self.support.lower)
        hi = np.full(p.shape, max(c.integration_limit() for c in self.components))
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            below = self._cdf(mid) < p
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(hi))):
                break
        return hi

    def breakpoints(self):
        pts = set()
        for c in self.components:
            pts.update(c.breakpoints())
        return tuple(sorted(pts))


def generalized_log(z, q: float):
    """(z**(1-q) - 1) / (1 - q), or log z when q = 1."""
    z_arr = np.asarray(z, dtype=float)
    if np.any(~(z_arr > 0)):
        raise DomainError("generalized_log needs z > 0")
    q = float(q)
    if q < 0:
        raise DomainError("generalized_log needs q >= 0")
    if q == 1.0:
        out = np.log(z_arr)
    else:
        # expm1 keeps the q -> 1 limit accurate
        out = np.expm1((1.0 - q) * np.log(z_arr)) / (1.0 - q)
    return float(out) if np.ndim(z) == 0 else out


def _divergence_integrand(F, G, theta):
    near_one = abs(theta - 1.0) < LOG_BRANCH

    def integrand(x):
        f = np.asarray(F.cdf(x), dtype=float)
        g = np.asarray(G.cdf(x), dtype=float)
        # -(F^theta - G^theta) is folded in so unbounded tails cancel pointwise
        out = g ** theta - f ** theta
        m = (f > 0) & (g > 0)
        fm, gm = f[m], g[m]
        if near_one:
            # F^theta * L_{1/theta}((F/G)^theta) -> F^theta * theta * log(F/G)
            out[m] += fm ** theta * theta * np.log(fm / gm)
        else:
            # F^theta * L_{1/theta}((F/G)^theta) = theta/(theta-1) * (F^(2theta-1) G^(1-theta) - F^theta)
            ft = fm ** theta
            out[m] += theta / (theta - 1.0) * (ft * (fm / gm) ** (theta - 1.0) - ft)
        return out

    return integrand


def cpig_divergence(F: Distribution, G: Distribution, theta: float, *,
                    tol=DEFAULT_TOL) -> MeasureResult:
    """CPIG divergence D_theta(F, G).

    For theta >= 1 this is the integral of F**theta L_{1/theta}((F/G)**theta)
    minus (cpig(F) - cpig(G)); for 0 < theta < 1 both parts change sign.
    Raises :class:`RatioSingularity` if F carries mass where G = 0.
    """
    theta = check_theta(theta)
    g_low = G.support.lower
    lo = min(F.support.lower, g_low)
    if F.support.lower < g_low and F.cdf(g_low) > RATIO_MASS:
        raise RatioSingularity(
            f"F(x) = {F.cdf(g_low):.3g} > 0 at x = {g_low} where G vanishes; F/G is unbounded"
        )
    # the cpig terms are taken over the common range, where an early-ending CDF is 1
    hi = max(F.support.upper, G.support.upper)
    # truncate an unbounded range at the later of the two tail quantiles
    carrier = max((F, G), key=lambda D: D.integration_limit())
    integral = integrate_over(carrier, _divergence_integrand(F, G, theta), lower=lo, upper=hi,
                              tol=tol, extra_breaks=(*F.breakpoints(), *G.breakpoints()))
    value = -integral.value if theta < 1.0 else integral.value
    return MeasureResult(value, integral.abs_err, QUADRATURE)


def _jensen(measure, components, weights, **kw):
    weights = _weights(weights)
    if len(components) < 2:
        raise DomainError("need at least two components")
    mix = MixtureCdf(components, weights)
    whole = measure(mix, **kw)
    parts = [measure(c, **kw) for c in components]
    avg = math.fsum(w * r.value for w, r in zip(weights, parts))
    err = whole.abs_err + math.fsum(w * r.abs_err for w, r in zip(weights, parts))
    method = QUADRATURE if err > 0 else whole.method
    return whole.value, avg, err, method


def jcpig(components: Sequence[Distribution], weights, theta: float, *,
          tol=DEFAULT_TOL) -> MeasureResult:
    """Jensen gap of CPIG over a mixture; nonnegative in both branches.

    theta <= 1: cpig(mixture) - sum p_i cpig(F_i); theta > 1: the reverse.
    All terms share the mixture's range, on which a component whose support
    ends early contributes F_i = 1, so the gap is integrated pointwise.
    """
    theta = check_theta(theta)
    weights = _weights(weights)
    if len(components) < 2:
        raise DomainError("need at least two components")
    mix = MixtureCdf(components, weights)
    sign = 1.0 if theta <= 1.0 else -1.0

    def gap(x):
        avg = sum(w * np.asarray(c.cdf(x), dtype=float) ** theta
                  for c, w in zip(components, weights) if w > 0)
        return sign * (np.asarray(mix.cdf(x), dtype=float) ** theta - avg)

    return integrate_over(mix, gap, tol=tol)


def jcpig_mixture_decomposition(components: Sequence[Distribution], weights, theta: float, *,
                                tol=DEFAULT_TOL) -> tuple[float, float]:
    """(jcpig, sum_i p_i D_theta(F_i, mixture)), computed independently."""
    weights = _weights(weights)
    left = jcpig(components, weights, theta, tol=tol).value
    mix = MixtureCdf(components, weights)
    right = math.fsum(w * cpig_divergence(c, mix, theta, tol=tol).value
                      for c, w in zip(components, weights) if w > 0)
    return left, right


def fcpe(F: Distribution, q: float, *, tol=DEFAULT_TOL) -> MeasureResult:
    """Fractional cumulative past entropy: integral of F (-log F)**q, q in (0, 1]."""
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise DomainError(f"fcpe order q must lie in (0, 1], got {q}")
    return integrate_over(F, lambda x: xlog_power(F.cdf(x), q), tol=tol)


def jfcpe(components: Sequence[Distribution], weights, q: float, *,
          tol=DEFAULT_TOL) -> MeasureResult:
    """fcpe(mixture) - sum p_i fcpe(F_i)."""
    whole, avg, err, method = _jensen(lambda D: fcpe(D, q, tol=tol), components, weights)
    return MeasureResult(whole - avg, err, method)


def cpte(F: Distribution, q: float, *, tol=DEFAULT_TOL) -> MeasureResult:
    """Cumulative past Taneja entropy -2**(q-1) * integral of F**q log F.

    Defined for q > 1; any q > 0 is accepted.
    """
    q = check_theta(q, "q")
    scale = 2.0 ** (q - 1.0)
    res = integrate_over(F, lambda x: xlog_power(F.cdf(x), 1.0, weight_power=q), tol=tol / scale)
    return MeasureResult(scale * res.value, scale * res.abs_err, res.method)


def jcpte(components: Sequence[Distribution], weights, q: float, *,
          tol=DEFAULT_TOL) -> MeasureResult:
    """cpte(mixture) - sum p_i cpte(F_i).

    Nonnegative when -u**q log u is concave on (0, 1), which is exactly
    1/2 <= q <= 1; outside that range the gap can take either sign.
    """
    whole, avg, err, method = _jensen(lambda D: cpte(D, q, tol=tol), components, weights)
    return MeasureResult(whole - avg, err, method)
