"""CSV and JSON writers for trajectories.

Floats are written with ``repr``, the shortest string that round-trips, so a
JSON file read back with :func:`json.load` reproduces every value exactly.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from ..trajectory import Trajectory
from .scenario import Scenario

__all__ = ["COLUMNS", "emit", "read_json", "trajectory_columns"]

COLUMNS = (
    "t",
    "env_s",
    "env_p",
    "re_field_s",
    "re_field_p",
    "rho_aa",
    "rho_bb",
    "rho_cc",
    "re_rho_ab",
    "im_rho_ab",
    "re_rho_cb",
    "im_rho_cb",
    "re_rho_ac",
    "im_rho_ac",
    "re_theta_s",
    "im_theta_s",
    "re_theta_p",
    "im_theta_p",
    "theta_eff",
)


def trajectory_columns(traj: Trajectory) -> dict[str, np.ndarray]:
    obs = traj.observables
    cols = {
        "t": traj.times,
        "env_s": traj.envelopes[:, 0],
        "env_p": traj.envelopes[:, 1],
        "re_field_s": traj.fields[:, 0].real,
        "re_field_p": traj.fields[:, 1].real,
        "rho_aa": obs.rho_aa,
        "rho_bb": obs.rho_bb,
        "rho_cc": obs.rho_cc,
        "re_rho_ab": obs.rho_ab.real,
        "im_rho_ab": obs.rho_ab.imag,
        "re_rho_cb": obs.rho_cb.real,
        "im_rho_cb": obs.rho_cb.imag,
        "re_rho_ac": obs.rho_ac.real,
        "im_rho_ac": obs.rho_ac.imag,
        "re_theta_s": traj.areas[:, 0].real,
        "im_theta_s": traj.areas[:, 0].imag,
        "re_theta_p": traj.areas[:, 1].real,
        "im_theta_p": traj.areas[:, 1].imag,
        "theta_eff": traj.theta_eff,
    }
    return {name: np.asarray(cols[name], dtype=float).reshape(-1) for name in COLUMNS}


def _rows(traj: Trajectory):
    cols = trajectory_columns(traj)
    for i in range(len(traj)):
        yield [float(cols[name][i]) for name in COLUMNS]


@contextmanager
def _open(destination):
    if destination is None or destination == "-":
        yield sys.stdout
    elif isinstance(destination, (str, Path)):
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            yield fh
    else:
        yield destination


def emit(
    traj: Trajectory,
    fmt: str = "csv",
    destination=None,
    *,
    scenario: Scenario | None = None,
    label: str | None = None,
    extra: dict | None = None,
) -> None:
    """Write ``traj`` as CSV or JSON to a path, an open file, or stdout."""
    fmt = fmt.lower()
    if fmt == "csv":
        with _open(destination) as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(COLUMNS)
            for row in _rows(traj):
                writer.writerow([repr(v) for v in row])
    elif fmt == "json":
        metadata = {
            "label": label,
            "columns": list(COLUMNS),
            "n_rows": len(traj),
            "scenario": None if scenario is None else scenario.to_dict(),
        }
        if extra:
            metadata.update(extra)
        payload = {
            "metadata": metadata,
            "rows": [dict(zip(COLUMNS, row)) for row in _rows(traj)],
        }
        text = json.dumps(payload, indent=1, allow_nan=True)
        with _open(destination) as fh:
            fh.write(text)
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}; expected csv or json")


def read_json(source) -> dict:
    if isinstance(source, (str, Path)):
        return json.loads(Path(source).read_text(encoding="utf-8"))
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        return json.load(source)
    raise TypeError("source must be a path or a readable file")
