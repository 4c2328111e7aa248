"""Probability generating functions of the hitting-time decomposition.

Everything here is driven by three derived quantities of the pair (s, b):
the oscillation frequency c = sqrt(2 log s) of the driftless exit pgf, the
drifted-passage exponent alpha = b - sqrt(b^2 - 2 log s), and their
combination ratio = exp(alpha)/cos(c), which must stay inside (1, 2) for
the geometric-sum pgf to converge. The closed-form hitting-time pgf bound
and its three-factor product form are both provided; they must agree to
floating-point accuracy, which pins down the formula against sign/typo
mistakes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InfeasibleSError

# cos(sqrt(2 log s)) > 0 forces s < exp(pi^2 / 8) regardless of b.
COSINE_S_CAP = math.exp(math.pi**2 / 8.0)

_BISECT_REL_TOL = 1e-12


@dataclass(frozen=True)
class PgfComponents:
    """Feasibility-checked ingredients shared by every pgf formula."""

    s: float
    b: float
    log_s: float
    c: float
    alpha: float
    ratio: float


class BindingConstraint(str, Enum):
    """Which feasibility condition caps the s-range from above."""

    RATIO_EQUALS_TWO = "ratio-equals-two"
    ALPHA_DOMAIN = "s-equals-exp-half-b-squared"
    COS_VANISHES = "cosine-vanishes"


@dataclass(frozen=True)
class FeasibleSRange:
    """Open interval (s_lo, s_hi) of feasible pgf arguments for a drift floor b."""

    s_lo: float
    s_hi: float
    constraint_binding_at_hi: BindingConstraint


def components(s: float, b: float) -> PgfComponents:
    """Validate (s, b) and compute the shared pgf ingredients.

    Raises `InfeasibleSError` naming the first violated condition:
    s <= 1, s >= exp(b^2/2), cos(sqrt(2 log s)) <= 0, or ratio outside (1, 2).
    """
    if not (math.isfinite(b) and b > 0):
        raise ValueError(f"drift floor b must be positive and finite, got {b}")
    if not (math.isfinite(s) and s > 1.0):
        raise InfeasibleSError("out-of-domain", f"pgf argument s must exceed 1, got {s}")
    log_s = math.log(s)
    disc = b * b - 2.0 * log_s
    if disc <= 0.0:
        raise InfeasibleSError(
            "alpha-complex",
            f"s={s} is not below exp(b^2/2)={math.exp(min(b * b / 2.0, 700.0)):.12g} for b={b}",
        )
    c = math.sqrt(2.0 * log_s)
    cos_c = math.cos(c)
    if cos_c <= 0.0:
        raise InfeasibleSError(
            "cosine-domain", f"s={s} is not below exp(pi^2/8)={COSINE_S_CAP:.12g}, so cos(c) <= 0"
        )
    alpha = b - math.sqrt(disc)
    ratio = math.exp(alpha) / cos_c
    if not (1.0 < ratio < 2.0):
        raise InfeasibleSError(
            "a2-ratio", f"exp(alpha)/cos(c) = {ratio:.12g} is outside (1, 2) for s={s}, b={b}"
        )
    return PgfComponents(s=s, b=b, log_s=log_s, c=c, alpha=alpha, ratio=ratio)


def pgf_bm_exit(x: float, comp: PgfComponents) -> float:
    """E[s^T] for standard Brownian motion started at x in [-1, 1] to exit
    the interval: cos(x c)/cos(c). Equals 1 at the boundary, >= 1 inside."""
    if abs(x) > 1.0:
        raise ValueError(f"start point must satisfy |x| <= 1, got {x}")
    return math.cos(x * comp.c) / math.cos(comp.c)


def pgf_geometric_half(r: float) -> float:
    """pgf E[r^G] = 1/(2 - r) of a Geometric(1/2) count, finite for r < 2."""
    if r >= 2.0:
        raise ValueError(f"geometric-half pgf diverges for r >= 2, got {r}")
    return 1.0 / (2.0 - r)


def pgf_drift_passage(a: float, comp: PgfComponents) -> float:
    """E[s^T] for Brownian motion with constant drift -b to cover distance
    a >= 0: exp(a * alpha)."""
    if a < 0.0:
        raise ValueError(f"passage distance must be non-negative, got {a}")
    return math.exp(a * comp.alpha)


def hitting_pgf_bound(y: float, comp: PgfComponents) -> float:
    """Closed-form upper bound on E[s^H] for the hitting time of 0 from y >= 1.

    exp((y-1) alpha) / cos(c) / (2 - ratio), with b^2 under every radical.
    Callers with general start points must clamp via max(1, |y|) first.
    """
    if y < 1.0:
        raise ValueError(f"bound requires y >= 1 (clamp with max(1, |y|)), got {y}")
    return math.exp((y - 1.0) * comp.alpha) / math.cos(comp.c) / (2.0 - comp.ratio)


def hitting_pgf_bound_factored(y: float, comp: PgfComponents) -> float:
    """The same bound assembled from its decomposition: a drifted passage
    from y to 1, a Geometric(1/2) number of excursions (each an exit from
    the unit interval times a drifted return), and a final conditioned
    exit. Must agree with `hitting_pgf_bound` to ~1e-12 relative."""
    if y < 1.0:
        raise ValueError(f"bound requires y >= 1 (clamp with max(1, |y|)), got {y}")
    excursion = pgf_bm_exit(0.0, comp) * pgf_drift_passage(1.0, comp)
    return pgf_drift_passage(y - 1.0, comp) * pgf_geometric_half(excursion) * pgf_bm_exit(0.0, comp)


def feasible_s_range(b: float) -> FeasibleSRange:
    """Upper end of the feasible s-interval for drift floor b, by bisection.

    The ratio exp(alpha)/cos(c) increases continuously from 1 at s = 1+, so
    the first-violated constraint is either ratio = 2 or one of the hard
    domain caps s = exp(b^2/2), s = exp(pi^2/8); the binding one is reported.
    """
    if not (math.isfinite(b) and b > 0):
        raise ValueError(f"drift floor b must be positive and finite, got {b}")
    half_b_sq = b * b / 2.0
    alpha_cap = math.inf if half_b_sq > 700.0 else math.exp(half_b_sq)
    if alpha_cap <= COSINE_S_CAP:
        s_cap, cap_binding = alpha_cap, BindingConstraint.ALPHA_DOMAIN
    else:
        s_cap, cap_binding = COSINE_S_CAP, BindingConstraint.COS_VANISHES

    probe = s_cap * (1.0 - _BISECT_REL_TOL)
    if _ratio_unchecked(probe, b) < 2.0:
        return FeasibleSRange(s_lo=1.0, s_hi=s_cap, constraint_binding_at_hi=cap_binding)

    lo, hi = 1.0 + _BISECT_REL_TOL, probe
    while hi - lo > _BISECT_REL_TOL * hi:
        mid = 0.5 * (lo + hi)
        if _ratio_unchecked(mid, b) < 2.0:
            lo = mid
        else:
            hi = mid
    return FeasibleSRange(
        s_lo=1.0, s_hi=0.5 * (lo + hi), constraint_binding_at_hi=BindingConstraint.RATIO_EQUALS_TWO
    )


def _ratio_unchecked(s: float, b: float) -> float:
    """exp(alpha)/cos(c) without feasibility gating; +inf past a domain cap."""
    log_s = math.log(s)
    disc = b * b - 2.0 * log_s
    if disc < 0.0:
        return math.inf
    cos_c = math.cos(math.sqrt(2.0 * log_s))
    if cos_c <= 0.0:
        return math.inf
    return math.exp(b - math.sqrt(disc)) / cos_c
