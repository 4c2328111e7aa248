"""Inverse problems over the bounds: minimal time to a target accuracy,
best pgf argument s, and parameter sweeps.

Both bound families have the exact form C(s) * s^{-t} before capping, so
the minimal real time for accuracy eps is log(C(s)/eps) / log(s) in closed
form, and choosing s reduces to minimizing that expression over the
feasible range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .bounds import hitting_tail_bound, tv_bound, tv_coefficients
from .errors import LangevinBoundsError
from .pgf import FeasibleSRange, components, feasible_s_range, hitting_pgf_bound
from .targets import TargetDensity, make_exponential_power

# Clipping margin keeping the s-search away from the singular endpoints
# (C(s) -> inf as ratio -> 2; log s -> 0 as s -> 1).
_S_EDGE_MARGIN = 1e-9
_S_OPT_REL_TOL = 1e-10
_COARSE_GRID_N = 65
_DENSE_GRID_N = 2048
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class BoundMode(str, Enum):
    HITTING = "hitting"
    TOTAL_VARIATION = "tv"


class SweepAxis(str, Enum):
    Y = "y"
    BETA = "beta"
    EPSILON = "epsilon"
    T = "t"


@dataclass(frozen=True)
class PlanRequest:
    """A planning problem: reach accuracy epsilon from start y.

    `s` fixes the pgf argument; None means optimize it over the feasible
    range.
    """

    density: TargetDensity
    y: float
    epsilon: float
    mode: BoundMode = BoundMode.HITTING
    s: float | None = None

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.y < 1.0:
            raise ValueError(f"planner requires start y >= 1, got {self.y}")
        if self.s is not None:
            components(self.s, self.density.b)  # raises InfeasibleSError early


@dataclass(frozen=True)
class PlanResult:
    s_star: float
    t_min_real: float
    t_min_int: int
    bound_at_t_min_int: float
    feasible_range: FeasibleSRange


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    s_star: float | None
    t_real: float | None
    t_int: int | None
    bound: float | None
    status: str


def bound_coefficient(req: PlanRequest, s: float) -> float:
    """C(s) with bound(t) = C(s) * s^{-t} before capping, for the request's mode."""
    if req.mode is BoundMode.HITTING:
        comp = components(s, req.density.b)
        return hitting_pgf_bound(max(1.0, abs(req.y)), comp)
    head, tail, _, _ = tv_coefficients(req.density, req.y, s)
    return head + tail


def minimal_t(req: PlanRequest, s: float) -> tuple[float, int]:
    """Smallest real and integer times with bound <= epsilon at fixed s."""
    c = bound_coefficient(req, s)
    t_real = max(0.0, math.log(c / req.epsilon) / math.log(s))
    # Nudge guards against ceil() tipping an exactly-integral boundary up.
    t_int = max(0, math.ceil(t_real - 1e-12))
    return t_real, t_int


def plan(req: PlanRequest) -> PlanResult:
    """Resolve s (fixed or optimized) and report minimal times and the
    achieved bound at the minimal integer time."""
    fr = feasible_s_range(req.density.b)
    s_star = req.s if req.s is not None else _optimize_s_value(req, fr)
    t_real, t_int = minimal_t(req, s_star)
    if req.mode is BoundMode.HITTING:
        achieved = hitting_tail_bound(req.density, req.y, s_star, float(t_int)).bound
    else:
        achieved = tv_bound(req.density, req.y, s_star, float(t_int)).total
    return PlanResult(
        s_star=s_star,
        t_min_real=t_real,
        t_min_int=t_int,
        bound_at_t_min_int=achieved,
        feasible_range=fr,
    )


def optimize_s(req: PlanRequest) -> PlanResult:
    """Plan with s chosen to minimize the real time to accuracy epsilon."""
    return plan(replace(req, s=None))


def sweep(req: PlanRequest, axis: SweepAxis, grid: list[float]) -> list[SweepRow]:
    """Evaluate the plan along one axis; per-point failures are recorded in
    the row's status instead of aborting the sweep."""
    if not grid:
        raise ValueError("sweep grid must be non-empty")
    rows: list[SweepRow] = []

    resolved: PlanResult | None = None
    if axis is SweepAxis.T:
        # The time axis reuses one resolved plan and reads the bound curve.
        resolved = plan(req)

    for value in grid:
        try:
            rows.append(_sweep_row(req, axis, float(value), resolved))
        except LangevinBoundsError as exc:
            rows.append(
                SweepRow(
                    axis=axis.value,
                    value=float(value),
                    s_star=None,
                    t_real=None,
                    t_int=None,
                    bound=None,
                    status=_status_tag(exc),
                )
            )
        except ValueError as exc:
            rows.append(
                SweepRow(
                    axis=axis.value,
                    value=float(value),
                    s_star=None,
                    t_real=None,
                    t_int=None,
                    bound=None,
                    status=f"invalid-parameter: {exc}",
                )
            )
    return rows


def _sweep_row(
    req: PlanRequest, axis: SweepAxis, value: float, resolved: PlanResult | None
) -> SweepRow:
    if axis is SweepAxis.T:
        assert resolved is not None
        if req.mode is BoundMode.HITTING:
            bound = hitting_tail_bound(req.density, req.y, resolved.s_star, value).bound
        else:
            bound = tv_bound(req.density, req.y, resolved.s_star, value).total
        return SweepRow(
            axis=axis.value,
            value=value,
            s_star=resolved.s_star,
            t_real=resolved.t_min_real,
            t_int=resolved.t_min_int,
            bound=bound,
            status="ok",
        )

    if axis is SweepAxis.Y:
        point_req = replace(req, y=value)
    elif axis is SweepAxis.EPSILON:
        point_req = replace(req, epsilon=value)
    elif axis is SweepAxis.BETA:
        point_req = replace(req, density=make_exponential_power(value))
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown sweep axis {axis}")
    res = plan(point_req)
    return SweepRow(
        axis=axis.value,
        value=value,
        s_star=res.s_star,
        t_real=res.t_min_real,
        t_int=res.t_min_int,
        bound=res.bound_at_t_min_int,
        status="ok",
    )


def _status_tag(exc: LangevinBoundsError) -> str:
    from .errors import InfeasibleSError, InvalidDensityError, TailDivergenceError

    if isinstance(exc, InfeasibleSError):
        return f"infeasible-s: {exc.clause}"
    if isinstance(exc, TailDivergenceError):
        return "tail-divergence"
    if isinstance(exc, InvalidDensityError):
        return f"invalid-density: {exc}"
    return f"error: {exc}"


def _objective(req: PlanRequest, s: float) -> float:
    return math.log(bound_coefficient(req, s) / req.epsilon) / math.log(s)


def _optimize_s_value(req: PlanRequest, fr: FeasibleSRange) -> float:
    lo = 1.0 + _S_EDGE_MARGIN
    hi = fr.s_hi - _S_EDGE_MARGIN
    if hi <= lo:
        return max(lo, min(hi, 0.5 * (lo + hi)))

    u_lo, u_hi = math.log(lo), math.log(hi)

    def f(u: float) -> float:
        return _objective(req, math.exp(u))

    us = [u_lo + (u_hi - u_lo) * i / (_COARSE_GRID_N - 1) for i in range(_COARSE_GRID_N)]
    vals = [f(u) for u in us]
    if _is_unimodal(vals):
        i = min(range(len(vals)), key=vals.__getitem__)
        a = us[max(0, i - 1)]
        b = us[min(len(us) - 1, i + 1)]
    else:
        # Rare fallback: dense scan, then refine around the best point.
        us = [u_lo + (u_hi - u_lo) * i / (_DENSE_GRID_N - 1) for i in range(_DENSE_GRID_N)]
        vals = [f(u) for u in us]
        i = min(range(len(vals)), key=vals.__getitem__)
        a = us[max(0, i - 1)]
        b = us[min(len(us) - 1, i + 1)]
    return math.exp(_golden_section(f, a, b))


def _is_unimodal(vals: list[float]) -> bool:
    """True if the sequence strictly decreases then strictly increases
    (either phase may be empty)."""
    rising = False
    for prev, cur in zip(vals, vals[1:]):
        if cur >= prev:
            rising = True
        elif rising:
            return False
    return True


def _golden_section(f, a: float, b: float) -> float:
    """Golden-section minimum of f on [a, b] to ~1e-10 width in u = log s."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > _S_OPT_REL_TOL:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)
