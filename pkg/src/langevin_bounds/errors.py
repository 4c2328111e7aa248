"""Exception types shared across the package.

Each class maps to one CLI exit code (see `cli.EXIT_CODES`); library users
can catch `LangevinBoundsError` to intercept everything at once.
"""

from __future__ import annotations


class LangevinBoundsError(Exception):
    """Base class for all package-specific failures."""


class InvalidDensityError(LangevinBoundsError):
    """The target density violates the standing assumptions (symmetry,
    inward drift, positive drift floor) or cannot be normalized."""


class NumericDomainError(LangevinBoundsError):
    """A numeric evaluation left its valid domain (non-finite integrand,
    non-decaying density, ...)."""


class InfeasibleSError(LangevinBoundsError):
    """The pgf argument s is outside the feasible range for the given
    drift floor b.

    `clause` names the first violated condition: "out-of-domain" (s <= 1),
    "alpha-complex" (s >= exp(b^2/2)), "cosine-domain" (cos(sqrt(2 log s))
    <= 0) or "a2-ratio" (the exponential/cosine ratio left (1, 2)).
    """

    def __init__(self, clause: str, message: str):
        super().__init__(message)
        self.clause = clause


class TailDivergenceError(LangevinBoundsError):
    """The stationary tail integrand pi(z) * exp(alpha z) is not decaying
    fast enough to truncate safely."""


class SimulationError(LangevinBoundsError):
    """A Monte Carlo run failed at run level (too many diverged paths,
    horizon too short for every path to terminate, ...)."""
