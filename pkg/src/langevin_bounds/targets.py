"""Symmetric target densities on the real line.

A target is described by its unnormalized log density, the matching
gradient (twice the diffusion drift), a drift floor b with
-d/dx log pi(x) >= b for x >= 1, and the normalization constant.
The exponential-power family exp(-|x|^beta) is built in; arbitrary
densities can be supplied as callables or as sampled (x, log pdf) tables.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate, interpolate

from .errors import InvalidDensityError, NumericDomainError

# Default grid for policing the density assumptions on user-supplied targets.
A1_GRID_MAX = 50.0
A1_GRID_N = 5001

# Relative density level at which "infinite" integration limits are truncated.
TAIL_TRUNCATION_REL = 1e-18

_MASS_QUAD_REL_TOL = 1e-10
_NORMALIZE_REL_TOL = 1e-14


@dataclass(frozen=True)
class TargetDensity:
    """Immutable description of a symmetric target density.

    `log_density_unnorm` and `grad_log_density` must accept floats and
    numpy arrays alike. `b` is the declared drift floor; `z_const` the
    normalizer of exp(log_density_unnorm).
    """

    kind: str  # "exp_power" or "custom"
    log_density_unnorm: Callable
    grad_log_density: Callable
    b: float
    z_const: float
    beta: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.b) and self.b > 0):
            raise InvalidDensityError(f"drift floor b must be positive and finite, got {self.b}")
        if not (math.isfinite(self.z_const) and self.z_const > 0):
            raise InvalidDensityError(f"normalizer must be positive and finite, got {self.z_const}")

    def density(self, x):
        """Normalized density pi(x)."""
        return np.exp(self.log_density_unnorm(x)) / self.z_const

    def spec(self) -> dict:
        """JSON-ready description (used in run manifests)."""
        if self.kind == "exp_power":
            return {"family": "exp_power", "beta": self.beta}
        return {"family": "custom", "b": self.b}


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of one density assumption on the check grid."""

    name: str
    passed: bool
    worst_x: float | None = None
    worst_value: float | None = None


@dataclass(frozen=True)
class CheckReport:
    """Per-condition verdicts from `check_a1`."""

    kind: str
    analytic: bool
    passed: bool
    conditions: tuple[ConditionCheck, ...]


def make_exponential_power(beta: float) -> TargetDensity:
    """Target density proportional to exp(-|x|^beta) for beta > 1.

    The inward drift magnitude beta * |x|^(beta-1) is non-decreasing on
    [1, inf), so the drift floor is its value at 1, i.e. b = beta, and the
    normalizer is 2 * Gamma(1 + 1/beta).
    """
    if not (math.isfinite(beta) and beta > 1.0):
        raise InvalidDensityError(
            f"beta must exceed 1 (got {beta}): at beta <= 1 the inward drift at |x| >= 1 "
            "has no positive non-decreasing floor"
        )

    def log_density_unnorm(x):
        return -np.abs(x) ** beta

    def grad_log_density(x):
        x = np.asarray(x, dtype=float)
        return -beta * np.sign(x) * np.abs(x) ** (beta - 1.0)

    return TargetDensity(
        kind="exp_power",
        log_density_unnorm=log_density_unnorm,
        grad_log_density=grad_log_density,
        b=beta,
        z_const=2.0 * math.gamma(1.0 + 1.0 / beta),
        beta=beta,
    )


def make_custom_density(
    log_density_unnorm: Callable,
    b: float,
    grad_log_density: Callable | None = None,
    z_const: float | None = None,
) -> TargetDensity:
    """Wrap a user-supplied log density with a declared drift floor b.

    The gradient defaults to a central finite difference and the
    normalizer is computed by adaptive quadrature over a window grown
    until the mass increment is below 1e-14 of the total. The declared
    assumptions are not verified here; run `check_a1` to police them.
    """
    if grad_log_density is None:
        grad_log_density = _finite_difference_grad(log_density_unnorm)
    if z_const is None:
        z_const = _normalize(log_density_unnorm)
    return TargetDensity(
        kind="custom",
        log_density_unnorm=log_density_unnorm,
        grad_log_density=grad_log_density,
        b=b,
        z_const=z_const,
    )


def custom_from_samples(path: str | Path, b: float) -> TargetDensity:
    """Build a custom target from a two-column CSV of (x, log pdf) samples.

    The log density is cubic-interpolated inside the sampled range and
    treated as -inf outside it; the drift uses finite differences of the
    interpolant.
    """
    xs, logps = _read_samples(Path(path))
    spline = interpolate.CubicSpline(xs, logps)
    x_lo, x_hi = float(xs[0]), float(xs[-1])

    def log_density_unnorm(x):
        x = np.asarray(x, dtype=float)
        inside = (x >= x_lo) & (x <= x_hi)
        out = np.full(x.shape, -np.inf)
        out[inside] = spline(x[inside])
        return out if out.ndim else float(out)

    grad = _finite_difference_grad(log_density_unnorm, clip=(x_lo, x_hi))
    z_const, _ = integrate.quad(
        lambda t: math.exp(spline(t)), x_lo, x_hi, epsabs=1e-14, epsrel=_MASS_QUAD_REL_TOL, limit=200
    )
    if not (math.isfinite(z_const) and z_const > 0):
        raise InvalidDensityError(f"sampled density does not normalize (integral {z_const})")
    return TargetDensity(
        kind="custom",
        log_density_unnorm=log_density_unnorm,
        grad_log_density=grad,
        b=b,
        z_const=z_const,
    )


def check_a1(d: TargetDensity, grid_max: float = A1_GRID_MAX, grid_n: int = A1_GRID_N) -> CheckReport:
    """Verify the density assumptions on a uniform grid over [0, grid_max].

    Checks symmetry of the log density, non-negativity of the inward
    drift on x >= 0, and the declared floor b on x >= 1 (the point x = 1
    is always included). Exponential-power targets pass analytically.
    """
    if grid_max < 1.0:
        raise ValueError(f"grid_max must be >= 1 (got {grid_max})")
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2 (got {grid_n})")

    if d.kind == "exp_power":
        conditions = tuple(
            ConditionCheck(name=name, passed=True) for name in ("symmetry", "drift-sign", "drift-floor")
        )
        return CheckReport(kind=d.kind, analytic=True, passed=True, conditions=conditions)

    xs = np.unique(np.append(np.linspace(0.0, grid_max, grid_n), 1.0))

    # Symmetry of the log density, checked away from the (shared) origin.
    xpos = xs[xs > 0.0]
    lp = np.asarray(d.log_density_unnorm(xpos), dtype=float)
    lm = np.asarray(d.log_density_unnorm(-xpos), dtype=float)
    finite = np.isfinite(lp) & np.isfinite(lm)
    asym = np.where(finite, np.abs(lp - lm), np.where(np.isfinite(lp) == np.isfinite(lm), 0.0, np.inf))
    tol = 1e-9 * np.maximum(1.0, np.abs(np.where(np.isfinite(lp), lp, 0.0)))
    i = int(np.argmax(asym - tol))
    symmetry = ConditionCheck(
        name="symmetry",
        passed=bool(np.all(asym <= tol)),
        worst_x=float(xpos[i]),
        worst_value=float(asym[i]),
    )

    # Inward drift -grad log pi >= 0 for x >= 0.
    inward = -np.asarray(d.grad_log_density(xs), dtype=float)
    i = int(np.argmin(inward))
    drift_sign = ConditionCheck(
        name="drift-sign",
        passed=bool(np.all(inward >= -1e-12)),
        worst_x=float(xs[i]),
        worst_value=float(inward[i]),
    )

    # Declared floor: -grad log pi >= b for x >= 1.
    xf = xs[xs >= 1.0]
    inward_f = -np.asarray(d.grad_log_density(xf), dtype=float)
    i = int(np.argmin(inward_f - d.b))
    drift_floor = ConditionCheck(
        name="drift-floor",
        passed=bool(np.all(inward_f >= d.b - 1e-12)),
        worst_x=float(xf[i]),
        worst_value=float(inward_f[i]),
    )

    conditions = (symmetry, drift_sign, drift_floor)
    return CheckReport(
        kind=d.kind,
        analytic=False,
        passed=all(c.passed for c in conditions),
        conditions=conditions,
    )


def mass_interval(d: TargetDensity, lo: float, hi: float) -> float:
    """Normalized mass of pi on [lo, hi] by adaptive quadrature.

    Infinite endpoints are truncated where the unnormalized density drops
    below 1e-18 of its value at the interval's inner endpoint.
    """
    if lo > hi:
        raise ValueError(f"empty interval: lo={lo} > hi={hi}")
    if lo == hi:
        return 0.0
    lo_t, hi_t = lo, hi
    if math.isinf(hi):
        ref = lo if math.isfinite(lo) else 0.0
        hi_t = decay_cutoff(d.log_density_unnorm, ref, TAIL_TRUNCATION_REL, direction=+1)
    if math.isinf(lo):
        ref = hi if math.isfinite(hi) else 0.0
        lo_t = decay_cutoff(d.log_density_unnorm, ref, TAIL_TRUNCATION_REL, direction=-1)

    def integrand(x: float) -> float:
        v = d.log_density_unnorm(x)
        if math.isnan(v):
            raise NumericDomainError(f"log density is NaN at x={x}")
        return math.exp(min(float(v), 700.0))

    val, _ = integrate.quad(integrand, lo_t, hi_t, epsabs=1e-14, epsrel=_MASS_QUAD_REL_TOL, limit=200)
    return min(1.0, max(0.0, val / d.z_const))


def decay_cutoff(log_density: Callable, ref_x: float, rel: float, direction: int = +1) -> float:
    """Smallest probed point beyond `ref_x` (in `direction`) where the
    unnormalized density falls below `rel` times its value at `ref_x`.

    Probes at geometrically growing distances; raises if the density
    never decays (e.g. an unnormalizable custom input).
    """
    ref_val = float(log_density(ref_x))
    if math.isnan(ref_val):
        raise NumericDomainError(f"log density is NaN at reference point x={ref_x}")
    target = ref_val + math.log(rel)
    step = 1.0
    for _ in range(200):
        x = ref_x + direction * step
        v = float(log_density(x))
        if math.isnan(v):
            raise NumericDomainError(f"log density is NaN at x={x}")
        if v < target:
            return x
        step *= 2.0
    raise NumericDomainError(
        f"density does not decay below {rel:g} of its value at x={ref_x} within probe range"
    )


def _finite_difference_grad(log_density: Callable, clip: tuple[float, float] | None = None) -> Callable:
    """Central finite-difference gradient of a (possibly clipped) log density."""

    def grad(x):
        x = np.asarray(x, dtype=float)
        h = 1e-6 * np.maximum(1.0, np.abs(x))
        xp, xm = x + h, x - h
        if clip is not None:
            xp = np.clip(xp, clip[0], clip[1])
            xm = np.clip(xm, clip[0], clip[1])
        denom = xp - xm
        denom = np.where(denom == 0.0, 1.0, denom)
        out = (np.asarray(log_density(xp), dtype=float) - np.asarray(log_density(xm), dtype=float)) / denom
        return out if out.ndim else float(out)

    return grad


def _normalize(log_density: Callable) -> float:
    """Integral of exp(log_density) over the line, by window doubling."""

    def integrand(x: float) -> float:
        v = float(log_density(x))
        if math.isnan(v):
            raise NumericDomainError(f"log density is NaN at x={x}")
        return math.exp(min(v, 700.0))

    window = 2.0
    total, _ = integrate.quad(integrand, -window, window, epsabs=1e-14, epsrel=_MASS_QUAD_REL_TOL, limit=200)
    for _ in range(60):
        right, _ = integrate.quad(integrand, window, 2 * window, epsabs=1e-16, epsrel=_MASS_QUAD_REL_TOL, limit=200)
        left, _ = integrate.quad(integrand, -2 * window, -window, epsabs=1e-16, epsrel=_MASS_QUAD_REL_TOL, limit=200)
        increment = right + left
        total += increment
        window *= 2.0
        if total > 0 and increment < _NORMALIZE_REL_TOL * total:
            if not math.isfinite(total):
                break
            return total
    raise NumericDomainError("density mass did not converge while growing the integration window")


def _read_samples(path: Path) -> tuple[np.ndarray, np.ndarray]:
    xs: list[float] = []
    logps: list[float] = []
    with path.open(newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                x, lp = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                continue  # header or malformed line
            xs.append(x)
            logps.append(lp)
    if len(xs) < 4:
        raise InvalidDensityError(f"need at least 4 (x, log pdf) samples in {path}, got {len(xs)}")
    order = np.argsort(xs)
    x_arr = np.asarray(xs, dtype=float)[order]
    lp_arr = np.asarray(logps, dtype=float)[order]
    if np.any(np.diff(x_arr) <= 0):
        raise InvalidDensityError(f"sample x values in {path} must be distinct")
    return x_arr, lp_arr
