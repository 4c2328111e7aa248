"""Independent high-precision oracles for the test suite.

These recompute every formula from scratch with mpmath at 40 digits:
the pgf ingredients, the closed-form and product-form hitting pgf bounds,
and the Gaussian-target total-variation terms reduced to erf/erfc by
completing the square. None of this code shares a code path with the
package under test.
"""

from __future__ import annotations

from mpmath import cos, erf, erfc, exp, log, mp, mpf, sqrt

mp.dps = 40


def mp_components(s, b) -> dict[str, float]:
    s, b = mpf(repr(s)), mpf(repr(b))
    log_s = log(s)
    c = sqrt(2 * log_s)
    alpha = b - sqrt(b * b - 2 * log_s)
    ratio = exp(alpha) / cos(c)
    return {
        "log_s": float(log_s),
        "c": float(c),
        "alpha": float(alpha),
        "ratio": float(ratio),
        "bm_exit_0": float(1 / cos(c)),
    }


def mp_bound_closed(y, s, b) -> float:
    s, b, y = mpf(repr(s)), mpf(repr(b)), mpf(repr(y))
    log_s = log(s)
    c = sqrt(2 * log_s)
    alpha = b - sqrt(b * b - 2 * log_s)
    ratio = exp(alpha) / cos(c)
    return float(exp((y - 1) * alpha) / cos(c) / (2 - ratio))


def mp_bound_product(y, s, b) -> float:
    """Three-factor assembly: drifted passage x geometric sum x conditioned exit."""
    s, b, y = mpf(repr(s)), mpf(repr(b)), mpf(repr(y))
    log_s = log(s)
    c = sqrt(2 * log_s)
    alpha = b - sqrt(b * b - 2 * log_s)
    exit_pgf = 1 / cos(c)
    excursion = exit_pgf * exp(alpha)
    return float(exp((y - 1) * alpha) * (1 / (2 - excursion)) * exit_pgf)


def mp_hitting_tail(y, s, b, t) -> float:
    """Uncapped s^{-t} * bound."""
    return float(mpf(repr(s)) ** (-mpf(repr(t))) * mp_bound_closed(y, s, b))


def mp_tv_terms_gauss(y, s, t) -> tuple[float, float, float]:
    """Head/tail/total for the Gaussian-type target exp(-x^2) (b = 2).

    mass[0, y] = erf(y)/2 and, completing the square,
    int_y^inf e^{-z^2 + alpha z} dz = e^{alpha^2/4} (sqrt(pi)/2) erfc(y - alpha/2),
    so the tail term collapses to
    s^{-t} * scale * e^{-alpha} * e^{alpha^2/4} * erfc(y - alpha/2)
    with scale = 1 / (cos(c) (2 - ratio)).
    """
    s, y, t = mpf(repr(s)), mpf(repr(y)), mpf(repr(t))
    b = mpf(2)
    log_s = log(s)
    c = sqrt(2 * log_s)
    alpha = b - sqrt(b * b - 2 * log_s)
    ratio = exp(alpha) / cos(c)
    scale = 1 / (cos(c) * (2 - ratio))
    damp = s ** (-t)
    head = 2 * (erf(y) / 2) * damp * scale * exp((y - 1) * alpha)
    tail = damp * scale * exp(-alpha) * exp(alpha * alpha / 4) * erfc(y - alpha / 2)
    return float(head), float(tail), float(head + tail)


def bisect_time_to_level(curve, eps: float, t_hi: float, tol: float = 1e-11) -> float:
    """Smallest t with curve(t) <= eps, for a decreasing curve; pure bisection."""
    lo, hi = 0.0, t_hi
    if curve(lo) <= eps:
        return 0.0
    while curve(hi) > eps:
        hi *= 2.0
        if hi > 1e9:
            raise AssertionError("bound never reaches the target level")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if curve(mid) <= eps:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
