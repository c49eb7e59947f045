"""Trajectory length and smoothness measures used to compare trajectories."""

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidInputError

ZERO_SEGMENT = 1e-12


@dataclass(frozen=True)
class TrajectoryReport:
    label: str
    pose_length_m: float
    joint_length_deg: float | None   # None when no joint path was given
    smoothness_deg: float

    def to_dict(self):
        return asdict(self)


def _translations(traj):
    p = traj.translations if hasattr(traj, "translations") else np.asarray(traj, dtype=float)
    return np.asarray(p, dtype=float)[:, :3]


def pose_length(traj):
    """Sum of distances between consecutive translations (m)."""
    p = _translations(traj)
    if len(p) < 2:
        raise InvalidInputError("pose_length needs at least 2 samples")
    return float(np.linalg.norm(np.diff(p, axis=0), axis=1).sum())


def joint_length(joints):
    """Summed absolute joint motion over the sequence, in degrees."""
    q = np.asarray(joints, dtype=float)
    if q.ndim != 2 or len(q) < 2:
        raise InvalidInputError("joint_length needs at least 2 joint vectors")
    return float(np.degrees(np.abs(np.diff(q, axis=0)).sum()))


def turn_angles(points):
    """Direction change (rad) at each interior point, zero-length segments dropped first."""
    p = _translations(points)
    seg = np.diff(p, axis=0)
    seg = seg[np.linalg.norm(seg, axis=1) >= ZERO_SEGMENT]
    if len(seg) < 2:
        return np.zeros(0)
    a, b = seg[:-1], seg[1:]
    return np.arctan2(np.linalg.norm(np.cross(a, b), axis=1), (a * b).sum(axis=1))


def smoothness(traj):
    """Mean direction change between consecutive segments, in degrees."""
    p = _translations(traj)
    if len(p) < 3:
        raise InvalidInputError("smoothness needs at least 3 samples")
    ang = turn_angles(p)
    if len(ang) == 0:
        return 0.0
    return float(np.degrees(ang.mean()))


def report(label, traj, joints=None):
    jl = joint_length(joints) if joints is not None else None
    return TrajectoryReport(label, pose_length(traj), jl, smoothness(traj))


REPORT_FIELDS = ("label", "pose_length_m", "joint_length_deg", "smoothness_deg")


def write_reports_csv(path, reports):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_FIELDS)
        for r in reports:
            jl = "" if r.joint_length_deg is None else repr(r.joint_length_deg)
            w.writerow([r.label, repr(r.pose_length_m), jl, repr(r.smoothness_deg)])


def read_reports_csv(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [TrajectoryReport(r["label"], float(r["pose_length_m"]),
                             float(r["joint_length_deg"]) if r["joint_length_deg"] else None,
                             float(r["smoothness_deg"])) for r in rows]


def write_reports_json(path, reports):
    Path(path).write_text(json.dumps([r.to_dict() for r in reports], indent=2), encoding="utf-8")
