"""
Lower bounds on the CPIG.

Three bounds are checked for a distribution F at a given theta:

(i)   cpig(F, theta) >= exp(H(F) - theta)                     (log-sum)
(ii)  cpig(F, theta) >= I * exp(-(theta - 1) * cpe(F) / I),   I = integral of F
(iii) cpig(F, theta) >= ((theta-1)/theta)**theta
                         * integral over (l, r) of ((1/v) integral_0^v F)**theta dv
      for theta > 1 and l >= 0                                (Hardy)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import Distribution
from .measures import check_theta, cpig, gcpe, shannon_entropy
from .numerics import Antiderivative, integrate_adaptive

SLACK_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """Both sides of an inequality ``lhs relation rhs``.

    ``slack`` is oriented so that the claim holds iff ``slack >= -1e-9``.
    A report with ``applicable=False`` is neither holding nor violated.
    """

    name: str
    lhs: float
    rhs: float
    relation: str = ">="
    applicable: bool = True
    note: str = ""

    def __post_init__(self):
        if self.relation not in (">=", "<="):
            raise ValueError(f"relation must be '>=' or '<=', got {self.relation!r}")

    @property
    def slack(self) -> float:
        if not self.applicable:
            return math.nan
        return self.lhs - self.rhs if self.relation == ">=" else self.rhs - self.lhs

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return self.slack >= -SLACK_TOL

    @property
    def status(self) -> str:
        if not self.applicable:
            return "not-applicable"
        return "holds" if self.holds else "violated"


def entropy_bound(F: Distribution, theta: float) -> BoundReport:
    theta = check_theta(theta)
    lhs = cpig(F, theta).value
    h = shannon_entropy(F).value
    return BoundReport("entropy", lhs, math.exp(h - theta))


def cpe_bound(F: Distribution, theta: float) -> BoundReport:
    theta = check_theta(theta)
    lhs = cpig(F, theta).value
    mass = gcpe(F, 0).value
    xi = gcpe(F, 1).value
    return BoundReport("cpe", lhs, mass * math.exp(-(theta - 1.0) * xi / mass))


def hardy_bound(F: Distribution, theta: float, *, tol: float = 1e-11) -> BoundReport:
    theta = check_theta(theta)
    lhs = cpig(F, theta).value
    if theta <= 1.0:
        return BoundReport("hardy", lhs, math.nan, applicable=False,
                           note="Hardy bound needs theta > 1")
    support = F.support
    lo, hi = support.lower, support.upper
    if lo < 0:
        return BoundReport("hardy", lhs, math.nan, applicable=False,
                           note="Hardy bound integrates from 0 and needs a nonnegative support")
    running = Antiderivative(F.cdf, lo, hi, tol=tol, breakpoints=F.breakpoints())

    # the inner average tends to F(0) = 0 as v -> 0; v = 0 itself is never sampled
    def integrand(v):
        return (running(v) / v) ** theta

    outer = integrate_adaptive(integrand, lo, hi, tol, breakpoints=F.breakpoints())
    rhs = ((theta - 1.0) / theta) ** theta * outer.value
    return BoundReport("hardy", lhs, rhs)


def bound_suite(F: Distribution, theta: float) -> list[BoundReport]:
    """The entropy, CPE and Hardy lower bounds, in that order."""
    return [entropy_bound(F, theta), cpe_bound(F, theta), hardy_bound(F, theta)]
