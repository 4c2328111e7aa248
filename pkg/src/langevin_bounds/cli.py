"""Command-line front end.

Subcommands: `bound`, `plan`, `sweep`, `validate`, `check-a1`. Options can
come from a JSON config file (--config) with command-line flags taking
precedence. Exit codes: 0 ok, 1 usage, 2 infeasible s, 3 tail divergence,
4 simulation/validation failure, 5 density-assumption violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .bounds import hitting_tail_bound, tv_bound, tv_bound_unreflected
from .errors import (
    InfeasibleSError,
    InvalidDensityError,
    NumericDomainError,
    SimulationError,
    TailDivergenceError,
)
from .planner import BoundMode, PlanRequest, SweepAxis, plan, sweep
from .reporting import (
    dumps,
    format_float,
    sweep_csv_text,
    to_jsonable,
    version_string,
)
from .simulate import SimConfig
from .targets import TargetDensity, check_a1, custom_from_samples, make_exponential_power
from .validation import default_pgf_config, run_validation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE_S = 2
EXIT_TAIL_DIVERGENCE = 3
EXIT_SIMULATION = 4
EXIT_A1_VIOLATION = 5


class UsageError(Exception):
    pass


_TOP_KEYS = {"density", "y", "s", "t", "epsilon", "mode", "axis", "grid", "sim", "output"}
_DENSITY_KEYS = {"family", "beta", "b", "samples"}
_SIM_KEYS = {
    "dt",
    "horizon",
    "n_paths",
    "seed",
    "bridge_correction",
    "workers",
    "coupling_paths",
    "pgf_paths",
    "pgf_dt",
}
_OUTPUT_KEYS = {"csv", "out", "outdir"}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleSError as exc:
        print(f"infeasible s ({exc.clause}): {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE_S
    except TailDivergenceError as exc:
        print(f"tail divergence: {exc}", file=sys.stderr)
        return EXIT_TAIL_DIVERGENCE
    except SimulationError as exc:
        print(f"simulation failure: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except (InvalidDensityError, NumericDomainError) as exc:
        print(f"density assumption violation: {exc}", file=sys.stderr)
        return EXIT_A1_VIOLATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="langevin-bounds",
        description="Certified hitting-time and total-variation convergence bounds "
        "for symmetric real-valued Langevin diffusions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="evaluate a bound at fixed (y, s, t)")
    _add_common(p_bound)
    p_bound.add_argument("--y", type=float, default=None, help="start state")
    p_bound.add_argument("--s", type=float, default=None, help="pgf argument")
    p_bound.add_argument("--t", type=float, default=None, help="time")
    p_bound.add_argument(
        "--mode", choices=["hitting", "tv", "tv-unreflected"], default=None, help="bound family"
    )
    p_bound.add_argument("--csv", default=None, help="optional CSV output path")
    p_bound.set_defaults(func=_cmd_bound)

    p_plan = sub.add_parser("plan", help="minimal time to a target accuracy")
    _add_common(p_plan)
    p_plan.add_argument("--y", type=float, default=None)
    p_plan.add_argument("--epsilon", type=float, default=None, help="target accuracy in (0,1)")
    p_plan.add_argument("--s", default=None, help="pgf argument, or 'auto' to optimize")
    p_plan.add_argument("--mode", choices=["hitting", "tv"], default=None)
    p_plan.set_defaults(func=_cmd_plan)

    p_sweep = sub.add_parser("sweep", help="plan along a parameter grid, emitting CSV")
    _add_common(p_sweep)
    p_sweep.add_argument("--y", type=float, default=None)
    p_sweep.add_argument("--epsilon", type=float, default=None)
    p_sweep.add_argument("--s", default=None)
    p_sweep.add_argument("--mode", choices=["hitting", "tv"], default=None)
    p_sweep.add_argument("--axis", choices=[a.value for a in SweepAxis], default=None)
    p_sweep.add_argument("--grid", default=None, help="comma-separated axis values")
    p_sweep.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate", help="Monte Carlo validation of the bounds")
    _add_common(p_val)
    p_val.add_argument("--y", type=float, default=None)
    p_val.add_argument("--s", type=float, default=None)
    p_val.add_argument("--dt", type=float, default=None)
    p_val.add_argument("--horizon", type=float, default=None)
    p_val.add_argument("--n-paths", type=int, default=None, help="hitting-run paths")
    p_val.add_argument("--coupling-paths", type=int, default=None)
    p_val.add_argument("--pgf-paths", type=int, default=None)
    p_val.add_argument("--pgf-dt", type=float, default=None)
    p_val.add_argument("--seed", type=int, default=None)
    p_val.add_argument("--workers", type=int, default=None)
    p_val.add_argument(
        "--bridge", action=argparse.BooleanOptionalAction, default=None,
        help="Brownian-bridge crossing correction (default on)",
    )
    p_val.add_argument("--outdir", default=None, help="directory for CSVs and manifest")
    p_val.set_defaults(func=_cmd_validate)

    p_check = sub.add_parser("check-a1", help="verify the density assumptions")
    _add_common(p_check)
    p_check.add_argument("--grid-max", type=float, default=None)
    p_check.add_argument("--grid-n", type=int, default=None)
    p_check.set_defaults(func=_cmd_check_a1)

    return parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, help="JSON config file; flags override it")
    p.add_argument("--beta", type=float, default=None, help="exponential-power exponent (> 1)")
    p.add_argument("--custom-samples", default=None, help="CSV of (x, log pdf) for a custom target")
    p.add_argument("--b", type=float, default=None, help="declared drift floor for a custom target")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    _reject_unknown(cfg, _TOP_KEYS, "top level")
    if "density" in cfg:
        _reject_unknown(cfg["density"], _DENSITY_KEYS, "density")
    if "sim" in cfg:
        _reject_unknown(cfg["sim"], _SIM_KEYS, "sim")
    if "output" in cfg:
        _reject_unknown(cfg["output"], _OUTPUT_KEYS, "output")
    return cfg


def _reject_unknown(section, allowed: set[str], where: str) -> None:
    if not isinstance(section, dict):
        raise UsageError(f"config section '{where}' must be an object")
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise UsageError(f"unknown config key(s) in {where}: {', '.join(unknown)}")


def _density(args, cfg: dict) -> TargetDensity:
    dens_cfg = dict(cfg.get("density", {}))
    if args.beta is not None:
        dens_cfg = {"family": "exp_power", "beta": args.beta}
    elif args.custom_samples is not None:
        dens_cfg = {"family": "custom", "samples": args.custom_samples, "b": args.b}
    if not dens_cfg:
        raise UsageError("no target density: pass --beta, or --custom-samples with --b, or a config")
    family = dens_cfg.get("family")
    if family == "exp_power":
        if dens_cfg.get("beta") is None:
            raise UsageError("exp_power density needs 'beta'")
        return make_exponential_power(float(dens_cfg["beta"]))
    if family == "custom":
        if dens_cfg.get("samples") is None or dens_cfg.get("b") is None:
            raise UsageError("custom density needs 'samples' (CSV path) and 'b' (drift floor)")
        return custom_from_samples(dens_cfg["samples"], float(dens_cfg["b"]))
    raise UsageError(f"unknown density family {family!r} (expected 'exp_power' or 'custom')")


def _pick(flag_value, cfg: dict, key: str, default=None):
    if flag_value is not None:
        return flag_value
    if key in cfg and cfg[key] is not None:
        return cfg[key]
    return default


def _require(value, name: str):
    if value is None:
        raise UsageError(f"missing required parameter: {name}")
    return value


def _emit(payload: dict) -> None:
    sys.stdout.write(dumps(payload))


def _cmd_bound(args) -> int:
    cfg = _load_config(args.config)
    d = _density(args, cfg)
    y = float(_require(_pick(args.y, cfg, "y"), "y"))
    s = float(_require(_pick(args.s, cfg, "s"), "s"))
    t = float(_require(_pick(args.t, cfg, "t"), "t"))
    mode = str(_pick(args.mode, cfg, "mode", "hitting"))

    if mode == "hitting":
        result = hitting_tail_bound(d, y, s, t)
    elif mode == "tv":
        result = tv_bound(d, y, s, t)
    elif mode == "tv-unreflected":
        result = tv_bound_unreflected(d, y, s, t)
    else:
        raise UsageError(f"unknown mode {mode!r}")

    payload = {
        "command": "bound",
        "version": version_string(),
        "density": d.spec(),
        "mode": mode,
        "y": y,
        "s": s,
        "t": t,
        "result": to_jsonable(result),
    }
    _emit(payload)

    csv_path = _pick(args.csv, cfg.get("output", {}), "csv")
    if csv_path:
        row = to_jsonable(result)
        header = ",".join(row)
        cells = ",".join(
            format_float(v) if isinstance(v, float) else str(v) for v in row.values()
        )
        Path(csv_path).write_text(f"{header}\n{cells}\n")
    return EXIT_OK


def _plan_request(args, cfg: dict) -> PlanRequest:
    d = _density(args, cfg)
    y = float(_require(_pick(args.y, cfg, "y"), "y"))
    epsilon = float(_require(_pick(args.epsilon, cfg, "epsilon"), "epsilon"))
    mode = BoundMode(str(_pick(args.mode, cfg, "mode", "hitting")))
    s_raw = _pick(args.s, cfg, "s")
    if s_raw is None:
        raise UsageError("missing required parameter: s (a number, or 'auto')")
    s = None if str(s_raw).lower() == "auto" else float(s_raw)
    return PlanRequest(density=d, y=y, epsilon=epsilon, mode=mode, s=s)


def _cmd_plan(args) -> int:
    cfg = _load_config(args.config)
    req = _plan_request(args, cfg)
    res = plan(req)
    payload = {
        "command": "plan",
        "version": version_string(),
        "density": req.density.spec(),
        "mode": req.mode.value,
        "y": req.y,
        "epsilon": req.epsilon,
        "s_policy": "fixed" if req.s is not None else "auto",
        "result": to_jsonable(res),
    }
    _emit(payload)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    req = _plan_request(args, cfg)
    axis_raw = _require(_pick(args.axis, cfg, "axis"), "axis")
    try:
        axis = SweepAxis(str(axis_raw))
    except ValueError as exc:
        raise UsageError(f"unknown sweep axis {axis_raw!r}") from exc
    grid_raw = _pick(args.grid, cfg, "grid")
    grid = _parse_grid(_require(grid_raw, "grid"))
    rows = sweep(req, axis, grid)
    text = sweep_csv_text(rows)

    out = _pick(args.out, cfg.get("output", {}), "out")
    if out:
        Path(out).write_text(text)
        manifest = {
            "command": "sweep",
            "version": version_string(),
            "density": req.density.spec(),
            "mode": req.mode.value,
            "y": req.y,
            "epsilon": req.epsilon,
            "s": req.s if req.s is not None else "auto",
            "axis": axis.value,
            "grid": grid,
            "rows_ok": sum(1 for r in rows if r.status == "ok"),
        }
        Path(str(out) + ".manifest.json").write_text(dumps(manifest))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_grid(raw) -> list[float]:
    if isinstance(raw, (list, tuple)):
        vals = [float(v) for v in raw]
    else:
        try:
            vals = [float(tok) for tok in str(raw).split(",") if tok.strip()]
        except ValueError as exc:
            raise UsageError(f"cannot parse grid {raw!r}: {exc}") from exc
    if not vals:
        raise UsageError("sweep grid is empty")
    return vals


def _cmd_validate(args) -> int:
    cfg = _load_config(args.config)
    sim_cfg = dict(cfg.get("sim", {}))
    d = _density_or_default(args, cfg)
    y = float(_pick(args.y, cfg, "y", 2.0))
    s = float(_pick(args.s, cfg, "s", 1.4))
    base = SimConfig(
        dt=float(_pick(args.dt, sim_cfg, "dt", 1e-3)),
        horizon=float(_pick(args.horizon, sim_cfg, "horizon", 50.0)),
        n_paths=int(_pick(args.n_paths, sim_cfg, "n_paths", 100_000)),
        seed=int(_pick(args.seed, sim_cfg, "seed", 42)),
        bridge_correction=bool(_pick(args.bridge, sim_cfg, "bridge_correction", True)),
        workers=int(_pick(args.workers, sim_cfg, "workers", 1)),
    )
    coupling_cfg = replace(base, n_paths=int(_pick(args.coupling_paths, sim_cfg, "coupling_paths", 50_000)))
    pgf_cfg = default_pgf_config(
        base,
        n_paths=int(_pick(args.pgf_paths, sim_cfg, "pgf_paths", 200_000)),
        dt=float(_pick(args.pgf_dt, sim_cfg, "pgf_dt", 1e-4)),
    )
    outdir = _pick(args.outdir, cfg.get("output", {}), "outdir", "validation_out")

    report = run_validation(d, y, s, base, coupling_cfg, pgf_cfg, outdir=outdir)
    for check in report.checks:
        print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}: {check.detail}")
    print(f"files: {', '.join(report.files)}")
    if not report.passed:
        print("validation FAILED", file=sys.stderr)
        return EXIT_SIMULATION
    return EXIT_OK


def _density_or_default(args, cfg: dict) -> TargetDensity:
    if args.beta is None and args.custom_samples is None and "density" not in cfg:
        return make_exponential_power(2.0)
    return _density(args, cfg)


def _cmd_check_a1(args) -> int:
    cfg = _load_config(args.config)
    d = _density(args, cfg)
    grid_max = args.grid_max if args.grid_max is not None else 50.0
    grid_n = args.grid_n if args.grid_n is not None else 5001
    report = check_a1(d, grid_max=grid_max, grid_n=grid_n)
    payload = {
        "command": "check-a1",
        "version": version_string(),
        "density": d.spec(),
        "result": to_jsonable(report),
    }
    _emit(payload)
    return EXIT_OK if report.passed else EXIT_A1_VIOLATION


if __name__ == "__main__":
    raise SystemExit(main())
