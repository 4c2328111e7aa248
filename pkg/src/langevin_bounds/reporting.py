"""Serialization of results: JSON reports, CSV tables, run manifests.

All floating-point numbers are rendered with 17 significant digits so a
reported value parses back to the exact double that was computed; output
bytes are a pure function of the inputs (no timestamps), which makes
repeated runs directly diffable.
"""

from __future__ import annotations

import dataclasses
import json
import subprocess
from enum import Enum
from pathlib import Path

import numpy as np

from . import __version__
from .planner import SweepRow
from .simulate import EmpiricalSurvival

SURVIVAL_CSV_COLUMNS = ("t", "survival", "std_err", "n_censored")
SWEEP_CSV_COLUMNS = ("axis", "value", "s_star", "t_real", "t_int", "bound", "status")


def format_float(x: float) -> str:
    """17-significant-digit decimal form; round-trips any finite double."""
    return format(float(x), ".17g")


def to_jsonable(obj):
    """Recursively convert dataclasses, enums and arrays to plain types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits.

    Non-finite floats are not representable in JSON and are emitted as
    null; results that can legitimately be non-finite carry a status
    field instead.
    """
    return _emit(to_jsonable(obj), indent, 0) + "\n"


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close_pad = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not np.isfinite(obj):
            return "null"
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close_pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_emit(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close_pad + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def survival_csv_text(es: EmpiricalSurvival) -> str:
    lines = [",".join(SURVIVAL_CSV_COLUMNS)]
    for t, p, se in zip(es.times, es.survival, es.std_err):
        lines.append(
            f"{format_float(t)},{format_float(p)},{format_float(se)},{es.n_censored}"
        )
    return "\n".join(lines) + "\n"


def write_survival_csv(path: str | Path, es: EmpiricalSurvival) -> None:
    Path(path).write_text(survival_csv_text(es))


def sweep_csv_text(rows: list[SweepRow]) -> str:
    lines = [",".join(SWEEP_CSV_COLUMNS)]
    for r in rows:
        cells = [
            r.axis,
            format_float(r.value),
            format_float(r.s_star) if r.s_star is not None else "",
            format_float(r.t_real) if r.t_real is not None else "",
            str(r.t_int) if r.t_int is not None else "",
            format_float(r.bound) if r.bound is not None else "",
            '"' + r.status.replace('"', '""') + '"' if "," in r.status else r.status,
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_manifest(path: str | Path, manifest: dict) -> None:
    Path(path).write_text(dumps(manifest))


def version_string() -> str:
    """git-describe form when available, else the package version."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return f"v{__version__}"
