"""Bound-domination checks: Monte Carlo runs versus the analytic curves.

Four suites: the driftless exit pgf and the drifted passage pgf against
their closed forms, the hitting-time survival against the tail bound, and
the anti-coupled meeting-time survival against both the per-draw averaged
start bound and the total-variation coefficient curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .bounds import averaged_start_bound_curve, hitting_tail_bound, tv_bound
from .pgf import components, pgf_bm_exit, pgf_drift_passage
from .reporting import to_jsonable, version_string, write_manifest, write_survival_csv
from .simulate import (
    SimConfig,
    simulate_anticoupled_pair,
    simulate_bm_exit_pgf,
    simulate_drift_passage_pgf,
    simulate_hitting,
)
from .targets import TargetDensity

_MAX_ORDERING_VIOLATION_RATE = 1e-4


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ValidationCheck, ...]
    passed: bool
    files: tuple[str, ...]


def run_validation(
    d: TargetDensity,
    y: float,
    s: float,
    hitting_cfg: SimConfig,
    coupling_cfg: SimConfig,
    pgf_cfg: SimConfig,
    outdir: str | Path | None = None,
) -> ValidationReport:
    """Run all suites, optionally writing survival CSVs plus a manifest."""
    comp = components(s, d.b)
    checks: list[ValidationCheck] = []

    est, se = simulate_bm_exit_pgf(s, 0.0, pgf_cfg)
    target = pgf_bm_exit(0.0, comp)
    checks.append(_within_3se("bm-exit-pgf", est, target, se))

    est, se = simulate_drift_passage_pgf(s, 1.0, d.b, pgf_cfg)
    target = pgf_drift_passage(1.0, comp)
    checks.append(_within_3se("drift-passage-pgf", est, target, se))

    hitting = simulate_hitting(d, y, hitting_cfg)
    bound_curve = np.asarray(
        [hitting_tail_bound(d, y, s, float(t)).bound for t in hitting.times]
    )
    checks.append(
        _dominated("hitting-domination", hitting.times, hitting.survival, hitting.std_err, bound_curve)
    )

    coupling = simulate_anticoupled_pair(d, y, coupling_cfg)
    ct = coupling.coupling_times
    pathwise = averaged_start_bound_curve(d, y, s, ct.times, coupling.stationary_draws)
    checks.append(
        _dominated("coupling-domination-pathwise", ct.times, ct.survival, ct.std_err, pathwise)
    )
    tv_curve = np.asarray([tv_bound(d, y, s, float(t)).total for t in ct.times])
    checks.append(_dominated("coupling-domination-tv", ct.times, ct.survival, ct.std_err, tv_curve))

    rate = coupling.ordering_violations / max(1, coupling.checked_steps)
    checks.append(
        ValidationCheck(
            name="coupling-ordering",
            passed=rate < _MAX_ORDERING_VIOLATION_RATE,
            detail=(
                f"violation rate {rate:.3g} over {coupling.checked_steps} checked steps "
                f"(max magnitude {coupling.max_violation_magnitude:.4g}, tolerance 3*sqrt(dt))"
            ),
        )
    )

    files: list[str] = []
    if outdir is not None:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        hitting_csv = out / "hitting_survival.csv"
        coupling_csv = out / "coupling_survival.csv"
        write_survival_csv(hitting_csv, hitting)
        write_survival_csv(coupling_csv, ct)
        manifest = {
            "command": "validate",
            "version": version_string(),
            "density": d.spec(),
            "y": y,
            "s": s,
            "sim": {
                "hitting": to_jsonable(hitting_cfg),
                "coupling": to_jsonable(coupling_cfg),
                "pgf": to_jsonable(pgf_cfg),
            },
            "n_flagged": {"hitting": hitting.n_flagged, "coupling": ct.n_flagged},
            "checks": [to_jsonable(c) for c in checks],
        }
        manifest_path = out / "manifest.json"
        write_manifest(manifest_path, manifest)
        files = [str(hitting_csv), str(coupling_csv), str(manifest_path)]

    return ValidationReport(
        checks=tuple(checks), passed=all(c.passed for c in checks), files=tuple(files)
    )


def default_pgf_config(base: SimConfig, n_paths: int = 200_000, dt: float = 1e-4) -> SimConfig:
    return replace(base, n_paths=n_paths, dt=dt)


def _within_3se(name: str, est: float, target: float, se: float) -> ValidationCheck:
    gap = abs(est - target)
    return ValidationCheck(
        name=name,
        passed=gap <= 3.0 * se,
        detail=f"estimate {est:.6f} vs formula {target:.6f}: |diff| {gap:.2e} <= 3*se {3 * se:.2e}",
    )


def _dominated(
    name: str, times: np.ndarray, survival: np.ndarray, std_err: np.ndarray, curve: np.ndarray
) -> ValidationCheck:
    slack = curve + 3.0 * std_err - survival
    worst = int(np.argmin(slack)) if slack.size else 0
    passed = bool(np.all(slack >= 0.0)) if slack.size else True
    detail = (
        f"min slack {slack[worst]:.3e} at t={times[worst]:g} "
        f"(survival {survival[worst]:.5f} vs bound {curve[worst]:.5f} + 3*se)"
        if slack.size
        else "no recorded times"
    )
    return ValidationCheck(name=name, passed=passed, detail=detail)
