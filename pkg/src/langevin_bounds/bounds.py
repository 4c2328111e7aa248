"""Tail and total-variation convergence bounds for the diffusion.

The hitting-time tail bound is s^{-t} times the closed-form pgf bound.
The total-variation bound splits into a head term (mass of pi below the
start point times the bound there) and a tail integral of
pi(z) * exp((z-1) alpha) over [y, inf); both carry the common s^{-t}
factor, so the time dependence is exactly exponential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import TailDivergenceError
from .pgf import PgfComponents, components, hitting_pgf_bound
from .targets import TargetDensity, mass_interval

_TAIL_QUAD_ABS_TOL = 1e-14
_TAIL_QUAD_REL_TOL = 1e-10
_TAIL_TRUNCATION_REL = 1e-18
# Probe offsets for the tail-decay guard; the log integrand must drop by at
# least one nat between consecutive probes.
_TAIL_PROBE_OFFSETS = (10.0, 20.0, 40.0)


@dataclass(frozen=True)
class HittingBoundResult:
    """Certified upper bound on P(hitting time of 0 >= t) from start y."""

    y_input: float
    y_eff: float
    s: float
    b: float
    t: float
    bound: float
    raw: float  # uncapped value s^{-t} * B(y_eff); kept for minimal-t searches
    capped: bool


@dataclass(frozen=True)
class TvBoundResult:
    """Certified upper bound on total-variation distance to stationarity."""

    head_term: float
    tail_term: float
    quad_abs_err: float
    total: float
    raw_total: float
    capped: bool
    variant: str  # "reflected" or "unreflected"


def hitting_tail_bound(d: TargetDensity, y: float, s: float, t: float) -> HittingBoundResult:
    """P(hitting time of 0 >= t) <= min(1, s^{-t} B(max(1, |y|), s, b)).

    Valid for any real start y: symmetry folds negative starts and the
    hitting time from |y| < 1 is dominated by the one from 1.
    """
    if t < 0.0:
        raise ValueError(f"time must be non-negative, got {t}")
    comp = components(s, d.b)
    y_eff = max(1.0, abs(y))
    # exp((y_eff-1) alpha - t log s) / (cos c (2 - ratio)), in one exp for stability
    raw = math.exp((y_eff - 1.0) * comp.alpha - t * comp.log_s) / (
        math.cos(comp.c) * (2.0 - comp.ratio)
    )
    return HittingBoundResult(
        y_input=y,
        y_eff=y_eff,
        s=s,
        b=d.b,
        t=t,
        bound=min(1.0, raw),
        raw=raw,
        capped=raw > 1.0,
    )


def tv_bound(d: TargetDensity, y: float, s: float, t: float) -> TvBoundResult:
    """Total-variation bound for the diffusion folded at 0, started at y >= 1."""
    return _tv_bound(d, y, s, t, variant="reflected")


def tv_bound_unreflected(d: TargetDensity, y: float, s: float, t: float) -> TvBoundResult:
    """Identical numeric bound for the unfolded diffusion (the coupling
    argument only ever uses the hitting time of the larger |start|)."""
    return _tv_bound(d, y, s, t, variant="unreflected")


def _tv_bound(d: TargetDensity, y: float, s: float, t: float, variant: str) -> TvBoundResult:
    if t < 0.0:
        raise ValueError(f"time must be non-negative, got {t}")
    head_coef, tail_coef, quad_err_coef, comp = tv_coefficients(d, y, s)
    damp = math.exp(-t * comp.log_s)
    head = head_coef * damp
    tail = tail_coef * damp
    raw_total = head + tail
    return TvBoundResult(
        head_term=head,
        tail_term=tail,
        quad_abs_err=quad_err_coef * damp,
        total=min(1.0, raw_total),
        raw_total=raw_total,
        capped=raw_total > 1.0,
        variant=variant,
    )


def tv_coefficients(
    d: TargetDensity, y: float, s: float
) -> tuple[float, float, float, PgfComponents]:
    """Head and tail coefficients of the TV bound at t = 0.

    head = 2 pi[0, y] B(y); tail = 2 int_y^inf pi(z) B(z) dz, where the
    z-dependence of B is exp((z-1) alpha) only, so the integral is
    truncated where pi(z) exp((z-1) alpha) falls below 1e-18 of its value
    at y. Returns (head, tail, quadrature error, components).
    """
    if y < 1.0:
        raise ValueError(f"total-variation bound requires start y >= 1, got {y}")
    comp = components(s, d.b)
    scale = 1.0 / (math.cos(comp.c) * (2.0 - comp.ratio))  # B(z) = scale * exp((z-1) alpha)
    head_coef = 2.0 * mass_interval(d, 0.0, y) * scale * math.exp((y - 1.0) * comp.alpha)

    log_z = math.log(d.z_const)

    def log_integrand(z: float) -> float:
        return float(d.log_density_unnorm(z)) - log_z + (z - 1.0) * comp.alpha

    _guard_tail_decay(d, y, comp.alpha)
    z_cut = _tail_cutoff(log_integrand, y)
    integral, abserr = integrate.quad(
        lambda z: math.exp(log_integrand(z)),
        y,
        z_cut,
        epsabs=_TAIL_QUAD_ABS_TOL,
        epsrel=_TAIL_QUAD_REL_TOL,
        limit=200,
    )
    tail_coef = 2.0 * scale * integral
    return head_coef, tail_coef, 2.0 * scale * abserr, comp


def averaged_start_bound_curve(
    d: TargetDensity, y: float, s: float, times: np.ndarray, initial_draws: np.ndarray
) -> np.ndarray:
    """Mean over stationary draws z of min(1, s^{-t} B(max(1, |y|, |z|))).

    This is the Monte Carlo counterpart of the TV bound's stationary
    average and dominates the survival curve of the coupling time when
    the second copy starts from the given draws.
    """
    comp = components(s, d.b)
    y_eff = np.maximum(1.0, np.maximum(abs(y), np.abs(np.asarray(initial_draws, dtype=float))))
    log_scale = -math.log(math.cos(comp.c) * (2.0 - comp.ratio))
    log_b = (y_eff - 1.0) * comp.alpha + log_scale
    times = np.asarray(times, dtype=float)
    out = np.empty(times.shape)
    for i, t in enumerate(times):
        out[i] = float(np.mean(np.minimum(1.0, np.exp(log_b - t * comp.log_s))))
    return out


def _guard_tail_decay(d: TargetDensity, y: float, alpha: float) -> None:
    """Require log pi(z) + alpha z to drop >= 1 nat between consecutive probes."""
    probes = [y + off for off in _TAIL_PROBE_OFFSETS]
    vals = [float(d.log_density_unnorm(z)) + alpha * z for z in probes]
    for (z0, v0), (z1, v1) in zip(zip(probes, vals), list(zip(probes, vals))[1:]):
        if not v1 <= v0 - 1.0:
            raise TailDivergenceError(
                "stationary tail integrand is not decaying fast enough: "
                f"log pi(z) + alpha z moves from {v0:.6g} at z={z0:g} to {v1:.6g} at z={z1:g} "
                "(needs >= 1 nat drop per probe step)"
            )


def _tail_cutoff(log_integrand, y: float) -> float:
    """Truncation point where the tail integrand is 1e-18 of its value at y."""
    target = log_integrand(y) + math.log(_TAIL_TRUNCATION_REL)
    offset = _TAIL_PROBE_OFFSETS[-1]
    for _ in range(60):
        z = y + offset
        if log_integrand(z) < target:
            return z
        offset *= 2.0
    raise TailDivergenceError("could not locate a truncation point for the tail integral")
