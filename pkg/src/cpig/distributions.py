"""
Univariate continuous and step distributions.

Every distribution exposes a vectorised CDF, survival function, density (when
it exists), generalised-inverse quantile and seeded inverse-transform
sampling. Instances are immutable and safe to share between threads.

Families
--------
Uniform             F(x) = (x - a) / (b - a) on [a, b]
Exponential         F(x) = 1 - exp(-rate x) on [0, inf)
Power               F(x) = x**c on [0, 1]
PiecewiseLinearCdf  linear interpolation between (x, p) knots
EmpiricalStep       the empirical distribution function of a sample
"""

from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, EmptySample, InvalidKnots, NoDensity, NonMonotone

# Upper tail mass left out when an unbounded support is truncated for quadrature.
TAIL_PROB = 1e-10


@dataclass(frozen=True)
class SupportInterval:
    """Closed hull [lower, upper] of a support; ``upper`` may be ``inf``."""

    lower: float
    upper: float

    def __post_init__(self):
        if math.isnan(self.lower) or math.isnan(self.upper):
            raise DomainError("support endpoints must not be NaN")
        # lower == upper only for a single-point empirical sample
        if not self.lower <= self.upper:
            raise DomainError(f"support lower {self.lower} exceeds upper {self.upper}")

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _as_float_array(x):
    return np.asarray(x, dtype=float)


def _unwrap(arr, like):
    """Return a Python float when the input was a scalar."""
    if np.ndim(like) == 0:
        return float(arr)
    return arr


class Distribution(ABC):
    """Common interface of all distribution representations."""

    has_density = True

    @property
    @abstractmethod
    def support(self) -> SupportInterval: ...

    @abstractmethod
    def _cdf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _ppf(self, p: np.ndarray) -> np.ndarray:
        """Quantile without argument checks; p in [0, 1]."""

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return 1.0 - self._cdf(x)

    def _pdf(self, x: np.ndarray) -> np.ndarray:
        raise NoDensity(f"{type(self).__name__} has no density")

    def cdf(self, x):
        return _unwrap(self._cdf(_as_float_array(x)), x)

    def sf(self, x):
        return _unwrap(self._sf(_as_float_array(x)), x)

    def pdf(self, x):
        if not self.has_density:
            raise NoDensity(f"{type(self).__name__} has no density")
        return _unwrap(self._pdf(_as_float_array(x)), x)

    def quantile(self, p):
        arr = _as_float_array(p)
        if np.any(~((arr > 0.0) & (arr < 1.0))):
            raise DomainError("quantile requires 0 < p < 1")
        return _unwrap(self._ppf(arr), p)

    def sample(self, n: int, seed: int) -> np.ndarray:
        """Draw ``n`` values by inverse transform; draw i depends only on (seed, i)."""
        if n < 1:
            raise DomainError("sample size must be at least 1")
        u = np.random.default_rng(seed).random(n)
        return self.from_uniform(u)

    def from_uniform(self, u):
        """Inverse-transform map u -> F^-1(u) for u in [0, 1)."""
        return self._ppf(np.asarray(u, dtype=float))

    def breakpoints(self) -> tuple[float, ...]:
        """Points where the CDF or its derivative is not smooth."""
        return ()

    def integration_limit(self) -> float:
        """Finite upper limit used when integrating over the support."""
        upper = self.support.upper
        if math.isfinite(upper):
            return upper
        return float(self._ppf(np.array(1.0 - TAIL_PROB)))


@dataclass(frozen=True)
class Uniform(Distribution):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.b > self.a):
            raise DomainError(f"Uniform requires finite a < b, got ({self.a}, {self.b})")

    @property
    def support(self):
        return SupportInterval(self.a, self.b)

    @property
    def width(self):
        return self.b - self.a

    def _cdf(self, x):
        return np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)

    def _pdf(self, x):
        return np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)

    def _ppf(self, p):
        return self.a + p * (self.b - self.a)


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise DomainError(f"Exponential rate must be positive, got {self.rate}")

    @property
    def support(self):
        return SupportInterval(0.0, math.inf)

    def _cdf(self, x):
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)

    def _sf(self, x):
        return np.where(x > 0, np.exp(-self.rate * np.maximum(x, 0.0)), 1.0)

    def _pdf(self, x):
        return np.where(x >= 0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)

    def _ppf(self, p):
        with np.errstate(divide="ignore"):
            return -np.log1p(-p) / self.rate


@dataclass(frozen=True)
class Power(Distribution):
    """F(x) = x**c on [0, 1]."""

    c: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise DomainError(f"Power exponent must be positive, got {self.c}")

    @property
    def support(self):
        return SupportInterval(0.0, 1.0)

    def _cdf(self, x):
        return np.clip(x, 0.0, 1.0) ** self.c

    def _pdf(self, x):
        inside = (x >= 0) & (x <= 1)
        xc = np.clip(x, 0.0, 1.0)
        with np.errstate(divide="ignore"):
            dens = self.c * xc ** (self.c - 1.0)
        return np.where(inside, dens, 0.0)

    def _ppf(self, p):
        return p ** (1.0 / self.c)


@dataclass(frozen=True, eq=False)
class PiecewiseLinearCdf(Distribution):
    """CDF interpolating linearly between knots ``(x, p)``.

    Use :func:`make_piecewise_cdf` to build one with validation.
    """

    knots: tuple[tuple[float, float], ...]
    _xs: np.ndarray = field(init=False, repr=False)
    _ps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        _validate_knots(self.knots)
        xs = np.array([k[0] for k in self.knots], dtype=float)
        ps = np.array([k[1] for k in self.knots], dtype=float)
        xs.flags.writeable = False
        ps.flags.writeable = False
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ps", ps)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinearCdf):
            return NotImplemented
        return self.knots == other.knots

    def __hash__(self):
        return hash(self.knots)

    @property
    def xs(self):
        return self._xs

    @property
    def ps(self):
        return self._ps

    @property
    def support(self):
        # l = inf{F > 0}, r = sup{F < 1}
        lo_idx = int(np.nonzero(self._ps > 0)[0][0]) - 1
        hi_idx = int(np.nonzero(self._ps >= 1.0)[0][0])
        return SupportInterval(float(self._xs[lo_idx]), float(self._xs[hi_idx]))

    def _cdf(self, x):
        return np.interp(x, self._xs, self._ps, left=0.0, right=1.0)

    def _pdf(self, x):
        slopes = np.diff(self._ps) / np.diff(self._xs)
        # right-continuous: a knot takes the slope of the segment to its right
        idx = np.searchsorted(self._xs, x, side="right") - 1
        inside = (idx >= 0) & (idx < len(slopes))
        return np.where(inside, slopes[np.clip(idx, 0, len(slopes) - 1)], 0.0)

    def _ppf(self, p):
        p = np.asarray(p, dtype=float)
        xs, ps = self._xs, self._ps
        # first knot with ps[j] >= p; segment (j-1, j) then has ps[j-1] < p
        j = np.searchsorted(ps, p, side="left")
        j = np.clip(j, 1, len(ps) - 1)
        p0, p1 = ps[j - 1], ps[j]
        x0, x1 = xs[j - 1], xs[j]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(p1 > p0, (p - p0) / (p1 - p0), 1.0)
        out = x0 + np.clip(frac, 0.0, 1.0) * (x1 - x0)
        support = self.support
        return np.where(p <= 0.0, support.lower, out)

    def breakpoints(self):
        return tuple(float(x) for x in self._xs)

    def shifted(self, c: float) -> "PiecewiseLinearCdf":
        """Location shift X + c."""
        return PiecewiseLinearCdf(tuple((x + c, p) for x, p in self.knots))

    def scaled(self, s: float) -> "PiecewiseLinearCdf":
        """Scale s * X, s > 0."""
        if s <= 0:
            raise DomainError("scale must be positive")
        return PiecewiseLinearCdf(tuple((x * s, p) for x, p in self.knots))


@dataclass(frozen=True, eq=False)
class EmpiricalStep(Distribution):
    """Empirical distribution function F_n of a sample.

    F_n(v) = i/n on [X_(i), X_(i+1)); no density.
    """

    values: tuple[float, ...]
    _sorted: np.ndarray = field(init=False, repr=False)

    has_density = False

    def __post_init__(self):
        if len(self.values) == 0:
            raise EmptySample("empirical CDF needs at least one value")
        arr = np.sort(np.asarray(self.values, dtype=float))
        if not np.all(np.isfinite(arr)):
            raise DomainError("sample values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "values", tuple(float(v) for v in arr))
        object.__setattr__(self, "_sorted", arr)

    def __eq__(self, other):
        if not isinstance(other, EmpiricalStep):
            return NotImplemented
        return self.values == other.values

    def __hash__(self):
        return hash(self.values)

    @property
    def n(self):
        return len(self._sorted)

    @property
    def sorted_values(self):
        return self._sorted

    @property
    def support(self):
        return SupportInterval(float(self._sorted[0]), float(self._sorted[-1]))

    def _cdf(self, x):
        return np.searchsorted(self._sorted, x, side="right") / self.n

    def _ppf(self, p):
        levels = np.arange(1, self.n + 1) / self.n
        k = np.searchsorted(levels, p, side="left")
        return self._sorted[np.clip(k, 0, self.n - 1)]

    def breakpoints(self):
        return tuple(np.unique(self._sorted).tolist())


@dataclass(frozen=True)
class MonotoneTransform:
    """An increasing map ``forward`` together with its derivative."""

    forward: Callable[[float], float]
    derivative: Callable[[float], float]

    def check(self, points) -> None:
        """Raise :class:`NonMonotone` unless phi' > 0 and phi increases on ``points``."""
        pts = np.sort(np.asarray(points, dtype=float))
        d = np.asarray([self.derivative(x) for x in pts], dtype=float)
        bad = np.nonzero(~(d > 0))[0]
        if bad.size:
            x = pts[bad[0]]
            raise NonMonotone(f"derivative {d[bad[0]]!r} is not positive at x={x!r}")
        vals = np.asarray([self.forward(x) for x in pts], dtype=float)
        drops = np.nonzero(np.diff(vals) <= 0)[0]
        if drops.size:
            raise NonMonotone(f"transform is not increasing near x={pts[drops[0]]!r}")


def _validate_knots(knots) -> None:
    if len(knots) < 2:
        raise InvalidKnots("need at least two knots", len(knots))
    prev_x = prev_p = None
    for i, knot in enumerate(knots):
        try:
            x, p = (float(v) for v in knot)
        except (TypeError, ValueError):
            raise InvalidKnots("knot must be an (x, p) pair of numbers", i) from None
        if not (math.isfinite(x) and math.isfinite(p)):
            raise InvalidKnots("knot values must be finite", i)
        if not 0.0 <= p <= 1.0:
            raise InvalidKnots(f"probability {p} outside [0, 1]", i)
        if i == 0 and p != 0.0:
            raise InvalidKnots("first probability must be 0", i)
        if prev_x is not None:
            if x <= prev_x:
                raise InvalidKnots("x must be strictly increasing", i)
            if p < prev_p:
                raise InvalidKnots("p must be nondecreasing", i)
        prev_x, prev_p = x, p
    if prev_p != 1.0:
        raise InvalidKnots("last probability must be 1", len(knots) - 1)


def make_piecewise_cdf(knots: Sequence[Sequence[float]]) -> PiecewiseLinearCdf:
    """Build a validated :class:`PiecewiseLinearCdf` from ``(x, p)`` pairs."""
    _validate_knots(knots)
    return PiecewiseLinearCdf(tuple((float(x), float(p)) for x, p in knots))


def empirical_cdf_spec(sample: Sequence[float]) -> EmpiricalStep:
    return EmpiricalStep(tuple(float(v) for v in sample))


def narrow_uniform_cdf(center: float, width: float = 1e-6) -> PiecewiseLinearCdf:
    """Near point mass at ``center``: uniform on an interval of ``width``."""
    half = width / 2.0
    return make_piecewise_cdf([(center - half, 0.0), (center + half, 1.0)])


def random_piecewise_cdf(rng: np.random.Generator, lower: float | None = None,
                         n_knots: int | None = None) -> PiecewiseLinearCdf:
    """Random bounded CDF for property batteries.

    Knot count 3-20, random positive x increments, random p increments with
    occasional flat segments, normalised to end at 1. The lower endpoint is
    nonnegative unless ``lower`` says otherwise.
    """
    if n_knots is None:
        n_knots = int(rng.integers(3, 21))
    if lower is None:
        lower = float(rng.uniform(0.0, 2.0))
    dx = rng.uniform(0.05, 1.0, size=n_knots - 1)
    dp = rng.uniform(0.0, 1.0, size=n_knots - 1)
    dp[rng.random(n_knots - 1) < 0.1] = 0.0
    if dp.sum() == 0.0:
        dp[int(rng.integers(0, n_knots - 1))] = 1.0
    xs = lower + np.concatenate([[0.0], np.cumsum(dx)])
    ps = np.concatenate([[0.0], np.cumsum(dp) / dp.sum()])
    ps[-1] = 1.0
    ps = np.minimum(np.maximum.accumulate(ps), 1.0)
    return PiecewiseLinearCdf(tuple(zip(xs.tolist(), ps.tolist())))


def cdf_eval(spec: Distribution, x):
    return spec.cdf(x)


def pdf_eval(spec: Distribution, x):
    return spec.pdf(x)


def quantile(spec: Distribution, p):
    return spec.quantile(p)


def sample(spec: Distribution, n: int, seed: int) -> np.ndarray:
    return spec.sample(n, seed)


def load_sample(path) -> np.ndarray:
    """Read sample values: one per line, or comma separated; '#' starts a comment."""
    text = Path(path).read_text()
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for tok in line.replace(",", " ").split():
            try:
                values.append(float(tok))
            except ValueError:
                raise DomainError(f"{path}:{lineno}: not a number: {tok!r}") from None
    if not values:
        raise EmptySample(f"{path}: no sample values")
    return np.asarray(values)


def load_piecewise_cdf(path) -> PiecewiseLinearCdf:
    """Read a JSON list of ``[x, p]`` pairs."""
    try:
        knots = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid knot file: {exc}") from None
    if not isinstance(knots, list):
        raise DomainError(f"{path}: expected a list of [x, p] pairs")
    return make_piecewise_cdf(knots)


def dump_piecewise_cdf(spec: PiecewiseLinearCdf, path) -> None:
    Path(path).write_text(json.dumps([list(k) for k in spec.knots]))
