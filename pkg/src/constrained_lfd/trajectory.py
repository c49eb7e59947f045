"""Pose and trajectory value types, smoothing, mandrel-frame transform, CSV I/O."""

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    AlignmentError,
    InvalidInputError,
    InvalidWindowError,
    ParseError,
    ValidationError,
)
from .geometry import invert_transform, matrix_to_pose, pose_to_matrix

DEMO_COLUMNS = ("t", "dx", "dy", "dz", "drx", "dry", "drz",
                "mx", "my", "mz", "mrx", "mry", "mrz")
POSE_COLUMNS = ("t", "x", "y", "z", "rx", "ry", "rz")


class Frame(enum.Enum):
    CAMERA = "camera"
    MANDREL = "mandrel"


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Pose6D:
    """Translation (m) plus rotation vector (rad)."""

    t: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        t = _frozen(self.t).reshape(3)
        r = _frozen(self.r).reshape(3)
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(r))):
            raise InvalidInputError("pose components must be finite")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", r)

    @classmethod
    def from_array(cls, v):
        v = np.asarray(v, dtype=float)
        return cls(v[:3], v[3:6])

    def as_array(self):
        return np.concatenate([self.t, self.r])

    def matrix(self):
        return pose_to_matrix(self.as_array())


class Trajectory:
    """Timestamped 6-DoF poses stored as ``times (n,)`` and ``poses (n, 6)``.

    Instances are read-only; operations return new trajectories.
    """

    __slots__ = ("times", "poses", "frame")

    def __init__(self, times, poses, frame=Frame.CAMERA):
        times = _frozen(times).reshape(-1)
        poses = _frozen(poses)
        if poses.ndim != 2 or poses.shape[1] != 6:
            raise InvalidInputError(f"poses must have shape (n, 6), got {poses.shape}")
        if len(times) != len(poses):
            raise InvalidInputError("times and poses differ in length")
        if len(times) < 2:
            raise InvalidInputError("a trajectory needs at least 2 samples")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(poses))):
            raise InvalidInputError("trajectory contains non-finite values")
        if np.any(np.diff(times) <= 0):
            raise ValidationError("timestamps must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "poses", poses)
        object.__setattr__(self, "frame", Frame(frame))

    def __setattr__(self, name, value):
        raise AttributeError("Trajectory is immutable")

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return f"Trajectory(n={len(self)}, frame={self.frame.value})"

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (self.frame == other.frame
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.poses, other.poses))

    __hash__ = None

    @property
    def translations(self):
        return self.poses[:, :3]

    @property
    def rotations(self):
        return self.poses[:, 3:]

    @property
    def duration(self):
        return float(self.times[-1] - self.times[0])

    def pose(self, i):
        return Pose6D.from_array(self.poses[i])

    def replace(self, times=None, poses=None, frame=None):
        return Trajectory(self.times if times is None else times,
                          self.poses if poses is None else poses,
                          self.frame if frame is None else frame)


@dataclass(frozen=True)
class DemoSet:
    """Demonstrations as (device, mandrel) trajectory pairs sharing timestamps."""

    demos: tuple
    names: tuple = ()

    def __post_init__(self):
        demos = tuple((d, m) for d, m in self.demos)
        if not demos:
            raise InvalidInputError("a demo set needs at least one demonstration")
        for device, mandrel in demos:
            if device.frame != Frame.CAMERA or mandrel.frame != Frame.CAMERA:
                raise InvalidInputError("raw demonstrations must be in the camera frame")
            if not np.array_equal(device.times, mandrel.times):
                raise AlignmentError("device and mandrel timestamps differ")
        names = tuple(self.names) or tuple(f"demo_{i:02d}" for i in range(len(demos)))
        if len(names) != len(demos):
            raise InvalidInputError("names and demos differ in length")
        object.__setattr__(self, "demos", demos)
        object.__setattr__(self, "names", names)

    def __len__(self):
        return len(self.demos)


def smooth_moving_average(traj, window):
    """Centered moving average applied to each of the six components.

    Near the ends the window shrinks symmetrically around the sample, so the
    first and last poses are kept and the output has the input's length.
    For even ``window`` the interior window spans ``(window-1)//2`` samples
    back and ``window//2`` forward.
    """
    n = len(traj)
    if not isinstance(window, (int, np.integer)) or window < 1 or window > n:
        raise InvalidWindowError(f"window must be in [1, {n}], got {window}")
    if window == 1:
        return traj
    back, fwd = (window - 1) // 2, window // 2
    csum = np.vstack([np.zeros((1, 6)), np.cumsum(traj.poses, axis=0)])
    idx = np.arange(n)
    lo = idx - back
    hi = idx + fwd
    edge = (lo < 0) | (hi > n - 1)
    m = np.minimum(np.minimum(idx, n - 1 - idx), back)
    lo = np.where(edge, idx - m, lo)
    hi = np.where(edge, idx + m, hi)
    out = (csum[hi + 1] - csum[lo]) / (hi - lo + 1)[:, None]
    # constant stretches must stay bit-exact; cumsum differences can drift by an ulp
    lo_v = np.array([traj.poses[a:b + 1].min(axis=0) for a, b in zip(lo, hi)])
    hi_v = np.array([traj.poses[a:b + 1].max(axis=0) for a, b in zip(lo, hi)])
    out = np.clip(out, lo_v, hi_v)
    return traj.replace(poses=out)


def to_mandrel_frame(device, mandrel):
    """Express each device pose relative to the simultaneous mandrel pose."""
    if device.frame != Frame.CAMERA or mandrel.frame != Frame.CAMERA:
        raise AlignmentError("both trajectories must be in the camera frame")
    if len(device) != len(mandrel) or not np.array_equal(device.times, mandrel.times):
        raise AlignmentError("device and mandrel trajectories are not sample-aligned")
    rel = invert_transform(pose_to_matrix(mandrel.poses)) @ pose_to_matrix(device.poses)
    return Trajectory(device.times, matrix_to_pose(rel), Frame.MANDREL)


def from_mandrel_frame(relative, mandrel):
    """Compose mandrel-frame poses back into the camera frame."""
    if len(relative) != len(mandrel):
        raise AlignmentError("length mismatch")
    T = pose_to_matrix(mandrel.poses) @ pose_to_matrix(relative.poses)
    return Trajectory(relative.times, matrix_to_pose(T), Frame.CAMERA)


def preprocess(demoset, window=10):
    """Smooth both streams of every demo, then move the device into the mandrel frame."""
    out = []
    for device, mandrel in demoset.demos:
        w = min(window, len(device))
        out.append(to_mandrel_frame(smooth_moving_average(device, w),
                                    smooth_moving_average(mandrel, w)))
    return out


# ---------------------------------------------------------------- CSV I/O

def _fmt(x):
    return repr(float(x))


def write_demo_csv(path, device, mandrel):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(DEMO_COLUMNS)
        for t, d, m in zip(device.times, device.poses, mandrel.poses):
            w.writerow([_fmt(t)] + [_fmt(v) for v in d] + [_fmt(v) for v in m])


def _read_rows(path, columns):
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), path) from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError("empty file", path, 1) from None
        if tuple(header) != tuple(columns):
            raise ParseError(f"expected header {','.join(columns)}", path, 1)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(columns):
                raise ParseError(f"expected {len(columns)} fields, got {len(row)}", path, lineno)
            try:
                vals = [float(c) for c in row]
            except ValueError as exc:
                raise ParseError(str(exc), path, lineno) from None
            if not all(np.isfinite(vals)):
                raise ParseError("non-finite value", path, lineno)
            rows.append(vals)
    if len(rows) < 2:
        raise ParseError("need at least 2 samples", path)
    data = np.array(rows)
    if np.any(np.diff(data[:, 0]) <= 0):
        bad = int(np.argmax(np.diff(data[:, 0]) <= 0)) + 3
        raise ValidationError(f"{path}: timestamps not strictly increasing (line {bad})")
    return data


def read_demo_csv(path):
    """Read one demonstration file; returns ``(device, mandrel)`` camera-frame trajectories."""
    data = _read_rows(path, DEMO_COLUMNS)
    t = data[:, 0]
    return Trajectory(t, data[:, 1:7]), Trajectory(t, data[:, 7:13])


def write_pose_csv(path, traj):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(POSE_COLUMNS)
        for t, p in zip(traj.times, traj.poses):
            w.writerow([_fmt(t)] + [_fmt(v) for v in p])


def read_pose_csv(path, frame=Frame.MANDREL):
    data = _read_rows(path, POSE_COLUMNS)
    return Trajectory(data[:, 0], data[:, 1:], frame)


def joint_columns(n=7):
    return ("t",) + tuple(f"q{i + 1}" for i in range(n))


def write_joint_csv(path, times, joints):
    joints = np.asarray(joints, dtype=float)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(joint_columns(joints.shape[1]))
        for t, q in zip(times, joints):
            w.writerow([_fmt(t)] + [_fmt(v) for v in q])


def read_joint_csv(path, n=7):
    data = _read_rows(path, joint_columns(n))
    return data[:, 0], data[:, 1:]
