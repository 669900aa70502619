"""CSV/JSON serialization of trajectories and Bode curves.

CSV files use '.' decimals, '\\n' line endings and fixed 9-significant-digit
scientific formatting, unconditionally, so outputs diff cleanly across
platforms.  Unavailable cells (no ground truth, flagged rows) are empty.
"""

import json
import math
from pathlib import Path

from .solver import Trajectory
from .sweep import BodeCurve

TRAJECTORY_HEADER = "t,x1,x2,x3,a,a1,a2,a3,e1,e2,e3"
BODE_HEADER = (
    "f_hz,omega_rad_s,channel,magnitude_db,phase_rad,phase_unwrapped_rad,"
    "residual_rms,source,flag"
)


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return f"{v:.8e}"


def write_trajectory_csv(path, traj: Trajectory) -> None:
    with open(path, "w", newline="") as f:
        f.write(TRAJECTORY_HEADER + "\n")
        has_truth = traj.truths is not None
        for i in range(traj.times.size):
            cells = [
                _num(traj.times[i]),
                _num(traj.states[i, 0]),
                _num(traj.states[i, 1]),
                _num(traj.states[i, 2]),
                _num(traj.inputs[i]),
            ]
            if has_truth:
                cells += [_num(traj.truths[i, j]) for j in range(3)]
                cells += [_num(traj.errors[i, j]) for j in range(3)]
            else:
                cells += [""] * 6
            f.write(",".join(cells) + "\n")


def trajectory_to_dict(traj: Trajectory) -> dict:
    out = {
        "t": [float(v) for v in traj.times],
        "x1": [float(v) for v in traj.states[:, 0]],
        "x2": [float(v) for v in traj.states[:, 1]],
        "x3": [float(v) for v in traj.states[:, 2]],
        "a": [float(v) for v in traj.inputs],
    }
    if traj.truths is not None:
        for j, name in enumerate(("a1", "a2", "a3")):
            out[name] = [float(v) for v in traj.truths[:, j]]
        for j, name in enumerate(("e1", "e2", "e3")):
            out[name] = [float(v) for v in traj.errors[:, j]]
    return out


def write_bode_csv(path, curve: BodeCurve) -> None:
    with open(path, "w", newline="") as f:
        f.write(BODE_HEADER + "\n")
        for r in curve.rows:
            cells = [
                _num(r.f_hz),
                _num(r.omega),
                str(r.channel),
                _num(r.magnitude_db),
                _num(r.phase_rad),
                _num(r.phase_unwrapped_rad),
                _num(r.residual_rms),
                r.source,
                r.flag,
            ]
            f.write(",".join(cells) + "\n")


def bode_to_dict(curve: BodeCurve) -> dict:
    """JSON form with params and config echoed for reproducibility."""
    return {
        "source": curve.source,
        "params": curve.params,
        "config": curve.config,
        "rows": [
            {
                "f_hz": r.f_hz,
                "omega_rad_s": r.omega,
                "channel": r.channel,
                "magnitude_db": _json_float(r.magnitude_db),
                "phase_rad": _json_float(r.phase_rad),
                "phase_unwrapped_rad": _json_float(r.phase_unwrapped_rad),
                "residual_rms": _json_float(r.residual_rms),
                "source": r.source,
                "flag": r.flag,
            }
            for r in curve.rows
        ],
    }


def _json_float(v):
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return None
    return v


def write_json(path, obj) -> None:
    with open(path, "w", newline="") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
