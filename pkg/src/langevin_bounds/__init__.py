"""Certified convergence bounds for symmetric real-valued Langevin diffusions.

Computes non-asymptotic upper bounds on hitting-time tails and on the
total-variation distance to stationarity, solves the associated inverse
problems (minimal time to a target accuracy, best pgf argument), and
validates every formula against Monte Carlo simulation of the diffusion
and its couplings.
"""

__version__ = "0.1.0"

from .bounds import (
    HittingBoundResult,
    TvBoundResult,
    averaged_start_bound_curve,
    hitting_tail_bound,
    tv_bound,
    tv_bound_unreflected,
    tv_coefficients,
)
from .errors import (
    InfeasibleSError,
    InvalidDensityError,
    LangevinBoundsError,
    NumericDomainError,
    SimulationError,
    TailDivergenceError,
)
from .pgf import (
    BindingConstraint,
    FeasibleSRange,
    PgfComponents,
    components,
    feasible_s_range,
    hitting_pgf_bound,
    hitting_pgf_bound_factored,
    pgf_bm_exit,
    pgf_drift_passage,
    pgf_geometric_half,
)
from .planner import (
    BoundMode,
    PlanRequest,
    PlanResult,
    SweepAxis,
    SweepRow,
    minimal_t,
    optimize_s,
    plan,
    sweep,
)
from .simulate import (
    CouplingRunStats,
    EmpiricalSurvival,
    SimConfig,
    simulate_anticoupled_pair,
    simulate_bm_exit_pgf,
    simulate_drift_passage_pgf,
    simulate_hitting,
    stationary_sampler,
)
from .targets import (
    CheckReport,
    ConditionCheck,
    TargetDensity,
    check_a1,
    custom_from_samples,
    make_custom_density,
    make_exponential_power,
    mass_interval,
)
from .validation import ValidationCheck, ValidationReport, run_validation

__all__ = [
    "__version__",
    "BindingConstraint",
    "BoundMode",
    "CheckReport",
    "ConditionCheck",
    "CouplingRunStats",
    "EmpiricalSurvival",
    "FeasibleSRange",
    "HittingBoundResult",
    "InfeasibleSError",
    "InvalidDensityError",
    "LangevinBoundsError",
    "NumericDomainError",
    "PgfComponents",
    "PlanRequest",
    "PlanResult",
    "SimConfig",
    "SimulationError",
    "SweepAxis",
    "SweepRow",
    "TailDivergenceError",
    "TargetDensity",
    "TvBoundResult",
    "ValidationCheck",
    "ValidationReport",
    "averaged_start_bound_curve",
    "check_a1",
    "components",
    "custom_from_samples",
    "feasible_s_range",
    "hitting_pgf_bound",
    "hitting_pgf_bound_factored",
    "hitting_tail_bound",
    "make_custom_density",
    "make_exponential_power",
    "mass_interval",
    "minimal_t",
    "optimize_s",
    "pgf_bm_exit",
    "pgf_drift_passage",
    "pgf_geometric_half",
    "plan",
    "run_validation",
    "simulate_anticoupled_pair",
    "simulate_bm_exit_pgf",
    "simulate_drift_passage_pgf",
    "simulate_hitting",
    "stationary_sampler",
    "sweep",
    "tv_bound",
    "tv_bound_unreflected",
    "tv_coefficients",
]
