import numpy as np
import pytest

from constrained_lfd.errors import InvalidInputError
from constrained_lfd.metrics import (
    TrajectoryReport,
    joint_length,
    pose_length,
    read_reports_csv,
    report,
    smoothness,
    write_reports_csv,
)
from constrained_lfd.trajectory import Frame, Trajectory


def traj(points):
    p = np.asarray(points, dtype=float)
    return Trajectory(np.arange(len(p)) * 0.1, np.hstack([p, np.zeros_like(p)]), Frame.MANDREL)


def test_pose_length_simple_cases():
    assert pose_length(traj([[0, 0, 0], [0.1, 0, 0]])) == pytest.approx(0.1)
    square = [[0, 0, 0], [0.1, 0, 0], [0.1, 0.1, 0], [0, 0.1, 0], [0, 0, 0]]
    assert pose_length(traj(square)) == pytest.approx(0.4)


def test_pose_length_matches_loop():
    rng = np.random.default_rng(0)
    p = rng.normal(size=(50, 3))
    total = 0.0
    for a, b in zip(p[:-1], p[1:]):
        total += ((b - a) ** 2).sum() ** 0.5
    assert pose_length(traj(p)) == pytest.approx(total, rel=1e-12)


def test_joint_length_cases():
    assert joint_length(np.zeros((5, 7))) == 0.0
    q = np.zeros((9, 7))
    q[:, 2] = np.linspace(0, np.pi, 9)
    assert joint_length(q) == pytest.approx(180.0)
    rng = np.random.default_rng(1)
    q = rng.normal(size=(20, 7))
    naive = sum(np.degrees(abs(q[i + 1, j] - q[i, j])) for i in range(19) for j in range(7))
    assert joint_length(q) == pytest.approx(naive, rel=1e-12)


def test_smoothness_cases():
    assert smoothness(traj([[0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 3]])) == 0.0
    zigzag = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [2, 1, 0], [2, 2, 0], [3, 2, 0]]
    assert smoothness(traj(zigzag)) == pytest.approx(90.0)


def test_smoothness_ignores_repeated_points():
    p = [[0, 0, 0], [1, 0, 0], [1, 0, 0], [2, 0, 0]]
    assert smoothness(traj(p)) == 0.0


def test_smoothness_against_arccos_oracle():
    rng = np.random.default_rng(2)
    p = rng.normal(size=(30, 3))
    d = np.diff(p, axis=0)
    cos = (d[:-1] * d[1:]).sum(axis=1) / np.linalg.norm(d[:-1], axis=1) / np.linalg.norm(d[1:], axis=1)
    assert smoothness(traj(p)) == pytest.approx(np.degrees(np.arccos(np.clip(cos, -1, 1))).mean(), rel=1e-10)


def test_errors_on_short_input():
    with pytest.raises(InvalidInputError):
        joint_length(np.zeros((1, 7)))
    with pytest.raises(InvalidInputError):
        smoothness(traj([[0, 0, 0], [1, 0, 0]]))
    with pytest.raises(InvalidInputError):
        pose_length(np.zeros((1, 3)))


def test_self_report_identical_and_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    t = traj(np.cumsum(rng.normal(size=(10, 3)), axis=0))
    a, b = report("mean", t), report("mean", t)
    assert a == b
    reps = [a, report("opt", t, np.zeros((10, 7)))]
    write_reports_csv(tmp_path / "r.csv", reps)
    back = read_reports_csv(tmp_path / "r.csv")
    assert back[1] == reps[1]
    assert back[0] == a and a.joint_length_deg is None
    assert isinstance(back[0], TrajectoryReport)
