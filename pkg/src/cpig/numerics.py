"""
Adaptive quadrature and finite differences.

``integrate_adaptive`` is a globally adaptive 21-point Gauss-Kronrod scheme
(QUADPACK's QAG with key 2) that evaluates the integrand on whole arrays of
nodes at once. Semi-infinite ranges are truncated at a caller-supplied point
and the remaining tail is integrated in doubling chunks until it is
negligible; an integrand that stays away from zero beyond the truncation
point is reported as :class:`~cpig.errors.Divergent`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, Divergent, MaxDepth

DEFAULT_TOL = 1e-9
DEFAULT_STEPS = {1: 1e-4, 2: 1e-3, 3: 1e-2}

# Divergence probes: integrand magnitude that counts as "not decaying".
PROBE_LEVEL = 1e-6
PROBE_COUNT = 3
MAX_TAIL_CHUNKS = 40

_EPS = np.finfo(float).eps

# 21-point Kronrod abscissae (non-negative half, descending) and weights;
# odd entries are the 10-point Gauss abscissae.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980040440,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# Full node set on [-1, 1] with matching Kronrod and Gauss weights.
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_wg_half = np.zeros(11)
_wg_half[1:10:2] = _WG
GAUSS_WEIGHTS = np.concatenate([_wg_half[:-1], _wg_half[::-1]])


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_err: float
    evaluations: int


def as_array_function(f):
    """Wrap ``f`` so it maps a 1-d array to a 1-d float array of the same shape."""

    def g(x):
        try:
            y = np.asarray(f(x), dtype=float)
            if y.shape == x.shape:
                return y
            if y.ndim == 0:
                return np.full(x.shape, float(y))
        except (TypeError, ValueError):
            pass
        return np.fromiter((f(float(t)) for t in x), dtype=float, count=x.size)

    return g


def _gk21(f, lo: np.ndarray, hi: np.ndarray):
    """Apply the 21-point rule on many intervals; returns (K, err, resabs) arrays."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fx = f(x.ravel()).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise DomainError(f"integrand is not finite at x={bad!r}")
    kron = fx @ KRONROD_WEIGHTS
    gauss = fx @ GAUSS_WEIGHTS
    resabs = np.abs(fx) @ KRONROD_WEIGHTS
    mean = 0.5 * kron
    resasc = np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS
    kron *= half
    gauss *= half
    resabs *= np.abs(half)
    resasc *= np.abs(half)
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50.0 * _EPS * resabs
    err = np.where(resabs > np.finfo(float).tiny / (50 * _EPS), np.maximum(floor, err), err)
    return kron, err, resabs


@dataclass
class _Leaves:
    """Final subintervals of an adaptive run, sorted by left endpoint."""

    lo: np.ndarray
    hi: np.ndarray
    value: np.ndarray


def _adaptive(f, a, b, tol, breakpoints, max_intervals):
    """Core globally-adaptive loop on a finite [a, b]."""
    cuts = sorted({float(p) for p in breakpoints if a < p < b})
    edges = np.array([a, *cuts, b], dtype=float)
    lo, hi = edges[:-1], edges[1:]
    vals, errs, resabs = _gk21(f, lo, hi)
    evaluations = lo.size * NODES.size
    # heap of (-err, lo, hi, val, err); unsplittable intervals go to `done`
    heap = [(-e, l, h, v, e) for l, h, v, e in zip(lo, hi, vals, errs)]
    heapq.heapify(heap)
    done = []
    total_val = float(np.sum(vals))
    total_err = float(np.sum(errs))
    abs_scale = float(np.sum(resabs))
    target = max(tol, 100.0 * _EPS * abs_scale)
    min_width = 64 * _EPS * max(abs(a), abs(b), 1.0)

    while total_err > target and heap:
        if len(heap) + len(done) >= max_intervals:
            leaves = _collect(heap, done)
            raise MaxDepth(
                f"adaptive quadrature on [{a}, {b}] exhausted {max_intervals} intervals "
                f"(error estimate {total_err:.3g} > tol {tol:.3g})",
                value=float(np.sum(leaves.value)), abs_err=total_err,
            )
        _, l, h, v, e = heapq.heappop(heap)
        if h - l <= min_width:
            done.append((l, h, v, e))
            continue
        m = 0.5 * (l + h)
        cv, ce, _ = _gk21(f, np.array([l, m]), np.array([m, h]))
        evaluations += 2 * NODES.size
        total_val += float(cv[0] + cv[1] - v)
        total_err += float(ce[0] + ce[1] - e)
        heapq.heappush(heap, (-ce[0], l, m, cv[0], ce[0]))
        heapq.heappush(heap, (-ce[1], m, h, cv[1], ce[1]))

    leaves = _collect(heap, done)
    # re-sum from leaves to shed the drift of the running total
    total_val = math.fsum(leaves.value.tolist())
    total_err = max(total_err, 0.0)
    if total_err > target:
        raise MaxDepth(
            f"adaptive quadrature on [{a}, {b}] cannot reach tol {tol:.3g} "
            f"(error estimate {total_err:.3g})",
            value=total_val, abs_err=total_err,
        )
    return total_val, total_err, evaluations, leaves


def _collect(heap, done):
    items = [(l, h, v) for _, l, h, v, _ in heap] + [(l, h, v) for l, h, v, _ in done]
    items.sort()
    arr = np.array(items, dtype=float).reshape(-1, 3)
    return _Leaves(arr[:, 0], arr[:, 1], arr[:, 2])


def _tail_probe_points(a, t):
    span = max(t - a, 1.0)
    return np.array([a + span * 2.0 ** k for k in range(1, PROBE_COUNT + 1)])


def integrate_adaptive(
    f: Callable,
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    breakpoints: Sequence[float] = (),
    truncation: float | None = None,
    max_intervals: int = 4000,
) -> QuadratureResult:
    """Integrate ``f`` over [a, b]; ``b`` may be ``+inf``.

    Parameters
    ----------
    f : callable
        Integrand. Called with 1-d float arrays when it accepts them, else
        point by point. It is never evaluated at a or b.
    a, b : float
        Limits, ``a < b``; ``a`` must be finite.
    tol : float
        Absolute error target.
    breakpoints : sequence of float
        Interior points where ``f`` is not smooth; they seed the subdivision.
    truncation : float, optional
        For ``b = inf``: where the main integral stops and the tail begins.
        Callers pass the natural point, e.g. a quantile close to 1.

    Returns
    -------
    QuadratureResult

    Raises
    ------
    Divergent
        The integrand does not decay towards an infinite upper limit.
    MaxDepth
        The interval budget ran out before the tolerance was met.
    """
    a = float(a)
    b = float(b)
    if not math.isfinite(a):
        raise DomainError("lower limit must be finite")
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    g = as_array_function(f)

    if math.isfinite(b):
        val, err, n, _ = _adaptive(g, a, b, tol, breakpoints, max_intervals)
        return QuadratureResult(val, err, n)

    t = float(truncation) if truncation is not None else _default_truncation(g, a)
    if not t > a:
        t = a + 1.0
    probes = g(_tail_probe_points(a, t))
    if np.all(np.abs(probes) > PROBE_LEVEL):
        raise Divergent(
            f"integrand does not decay beyond x={t:.6g} "
            f"(probe values {', '.join(f'{p:.3g}' for p in probes)})"
        )
    val, err, n, _ = _adaptive(g, a, t, 0.5 * tol, breakpoints, max_intervals)
    chunk_tol = 0.1 * tol
    lo = t
    for _ in range(MAX_TAIL_CHUNKS):
        hi = a + 2.0 * (lo - a)
        cval, cerr, cn, _ = _adaptive(g, lo, hi, chunk_tol, breakpoints, max_intervals)
        val += cval
        err += cerr
        n += cn
        lo = hi
        if abs(cval) <= chunk_tol:
            # remaining tail estimated by the last, already negligible chunk
            err += abs(cval)
            return QuadratureResult(val, err, n)
    raise Divergent(f"tail beyond x={t:.6g} has not converged after {MAX_TAIL_CHUNKS} chunks")


def _default_truncation(g, a):
    """Doubling search for a point where |f| has dropped below 1e-12."""
    t = a + 1.0
    for _ in range(60):
        if abs(float(g(np.array([t]))[0])) < 1e-12:
            return t
        t = a + 2.0 * (t - a)
    return t


class Antiderivative:
    """V -> integral of f over [a, V], for V in [a, b].

    Built from one adaptive run: the leaves of the subdivision hold
    cumulative sums, and the partial leaf is finished with the same
    21-point rule.
    """

    def __init__(self, f, a, b, tol=DEFAULT_TOL, breakpoints=()):
        self._f = as_array_function(f)
        self.a = float(a)
        self.b = float(b)
        value, err, evals, leaves = _adaptive(self._f, self.a, self.b, tol, breakpoints, 4000)
        self.total = value
        self.abs_err = err
        self.evaluations = evals
        self._lo = leaves.lo
        self._hi = leaves.hi
        self._cum = np.concatenate([[0.0], np.cumsum(leaves.value)])

    def __call__(self, v):
        v_arr = np.atleast_1d(np.asarray(v, dtype=float))
        if np.any((v_arr < self.a) | (v_arr > self.b)):
            raise DomainError(f"antiderivative defined on [{self.a}, {self.b}] only")
        k = np.clip(np.searchsorted(self._lo, v_arr, side="right") - 1, 0, self._lo.size - 1)
        start = self._lo[k]
        partial = np.zeros_like(v_arr)
        mask = v_arr > start
        if np.any(mask):
            pv, _, _ = _gk21(self._f, start[mask], v_arr[mask])
            partial[mask] = pv
        out = self._cum[k] + partial
        return float(out[0]) if np.ndim(v) == 0 else out


def finite_difference(g: Callable[[float], float], x0: float, order: int = 1,
                      h: float | None = None) -> float:
    """Central-difference derivative of ``g`` at ``x0``; error O(h**2).

    Default steps are 1e-4, 1e-3 and 1e-2 for orders 1, 2 and 3.
    """
    if order not in DEFAULT_STEPS:
        raise DomainError(f"order must be 1, 2 or 3, got {order}")
    if h is None:
        h = DEFAULT_STEPS[order]
    if h <= 0:
        raise DomainError("step h must be positive")
    if order == 1:
        return (g(x0 + h) - g(x0 - h)) / (2.0 * h)
    if order == 2:
        return (g(x0 + h) - 2.0 * g(x0) + g(x0 - h)) / (h * h)
    return (g(x0 + 2 * h) - 2.0 * g(x0 + h) + 2.0 * g(x0 - h) - g(x0 - 2 * h)) / (2.0 * h ** 3)


# Stencil coefficients, used to propagate value errors through the difference.
STENCIL_ABS_SUM = {1: 1.0, 2: 4.0, 3: 3.0}
