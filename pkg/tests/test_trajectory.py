import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from constrained_lfd.errors import (
    AlignmentError,
    InvalidInputError,
    InvalidWindowError,
    ParseError,
    ValidationError,
)
from constrained_lfd.geometry import (
    canonical_rotvec,
    matrix_to_rotvec,
    pose_to_matrix,
    rotvec_to_matrix,
)
from constrained_lfd.trajectory import (
    DemoSet,
    Frame,
    Pose6D,
    Trajectory,
    from_mandrel_frame,
    read_demo_csv,
    smooth_moving_average,
    to_mandrel_frame,
    write_demo_csv,
)

finite3 = arrays(float, 3, elements=st.floats(-10, 10, allow_nan=False))


def make_traj(poses, frame=Frame.CAMERA):
    poses = np.asarray(poses, dtype=float)
    return Trajectory(np.arange(len(poses)) * 0.1, poses, frame)


def test_zero_rotation_is_identity():
    assert np.array_equal(rotvec_to_matrix([0.0, 0.0, 0.0]), np.eye(3))


def test_half_turn_about_x():
    assert np.allclose(rotvec_to_matrix([np.pi, 0, 0]), np.diag([1.0, -1.0, -1.0]), atol=1e-15)


def test_round_trip_random_vectors():
    rng = np.random.default_rng(1)
    axes = rng.normal(size=(1000, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    r = axes * rng.uniform(0, np.pi, size=(1000, 1))
    back = matrix_to_rotvec(rotvec_to_matrix(r))
    assert np.max(np.abs(back - r)) < 1e-10


def test_round_trip_near_pi_and_tiny():
    for r in ([np.pi - 1e-7, 0, 0], [0, 1e-10, -2e-10], [1.2, -1.9, 2.0], [0, 0, np.pi - 1e-4]):
        r = np.array(r)
        assert np.allclose(matrix_to_rotvec(rotvec_to_matrix(r)), r, atol=1e-10)


@pytest.mark.parametrize("angle", [1e-7, 1e-6, 1e-5, 1e-4, 5e-4, 2e-3])
def test_round_trip_small_angles(angle):
    axis = np.array([0.3, -0.5, 0.8]) / np.linalg.norm([0.3, -0.5, 0.8])
    back = matrix_to_rotvec(rotvec_to_matrix(axis * angle))
    assert np.allclose(back, axis * angle, rtol=1e-8, atol=1e-15)


def test_canonical_at_pi_picks_positive_first_component():
    assert np.allclose(canonical_rotvec([-np.pi, 0, 0]), [np.pi, 0, 0])
    assert np.allclose(canonical_rotvec([0, -np.pi, 0]), [0, np.pi, 0])


def test_canonical_wraps_large_angles():
    r = np.array([0.0, 0.0, 1.5 * np.pi])
    c = canonical_rotvec(r)
    assert np.linalg.norm(c) <= np.pi + 1e-12
    assert np.allclose(rotvec_to_matrix(c), rotvec_to_matrix(r), atol=1e-12)


def test_rotvec_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        rotvec_to_matrix([np.nan, 0, 0])


@settings(max_examples=200, deadline=None)
@given(finite3)
def test_rotation_matrix_orthonormal(r):
    R = rotvec_to_matrix(r)
    assert np.allclose(R.T @ R, np.eye(3), atol=1e-12)
    assert abs(np.linalg.det(R) - 1.0) < 1e-12


def test_pose6d_validates():
    p = Pose6D([1, 2, 3], [0, 0, 0.1])
    assert p.as_array().tolist() == [1, 2, 3, 0, 0, 0.1]
    with pytest.raises(InvalidInputError):
        Pose6D([np.inf, 0, 0], [0, 0, 0])


def test_trajectory_invariants():
    with pytest.raises(ValidationError):
        Trajectory([0.0, 0.0, 1.0], np.zeros((3, 6)))
    with pytest.raises(InvalidInputError):
        Trajectory([0.0], np.zeros((1, 6)))
    t = make_traj(np.zeros((3, 6)))
    with pytest.raises(AttributeError):
        t.frame = Frame.MANDREL
    with pytest.raises(ValueError):
        t.poses[0, 0] = 1.0


# ---------------------------------------------------------------- smoothing

def test_smoothing_constant_unchanged():
    t = make_traj(np.tile([0.3, -0.1, 0.7, 0.01, 0.02, 0.03], (40, 1)))
    assert smooth_moving_average(t, 10) == t


def test_smoothing_window_one_identity():
    rng = np.random.default_rng(0)
    t = make_traj(rng.normal(size=(20, 6)))
    assert smooth_moving_average(t, 1) == t


def test_smoothing_linear_ramp_interior():
    ramp = np.zeros((30, 6))
    ramp[:, 0] = np.arange(30) * 0.01
    out = smooth_moving_average(make_traj(ramp), 3)
    assert np.allclose(out.poses[1:-1, 0], ramp[1:-1, 0], atol=1e-15)


def test_smoothing_keeps_endpoints_and_shape():
    rng = np.random.default_rng(3)
    t = make_traj(rng.normal(size=(25, 6)))
    out = smooth_moving_average(t, 10)
    assert len(out) == len(t)
    assert np.array_equal(out.times, t.times)
    assert np.array_equal(out.poses[0], t.poses[0])
    assert np.array_equal(out.poses[-1], t.poses[-1])


def test_smoothing_matches_direct_window_means():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(15, 6))
    out = smooth_moving_average(make_traj(x), 4)
    # window 4: one back, two forward; truncated windows stay centred
    expected = []
    n = len(x)
    for i in range(n):
        lo, hi = i - 1, i + 2
        if lo < 0 or hi > n - 1:
            m = min(i, n - 1 - i, 1)
            lo, hi = i - m, i + m
        expected.append(x[lo:hi + 1].mean(axis=0))
    assert np.allclose(out.poses, expected, atol=1e-14)


@pytest.mark.parametrize("window", [0, 26])
def test_smoothing_rejects_bad_window(window):
    t = make_traj(np.zeros((25, 6)))
    with pytest.raises(InvalidWindowError):
        smooth_moving_average(t, window)


@settings(max_examples=50, deadline=None)
@given(arrays(float, (12, 6), elements=st.floats(-5, 5, allow_nan=False)), st.integers(1, 12))
def test_smoothing_stays_within_range(x, window):
    out = smooth_moving_average(make_traj(x), window)
    assert len(out) == 12
    assert np.all(out.poses >= x.min(axis=0) - 1e-12)
    assert np.all(out.poses <= x.max(axis=0) + 1e-12)


# ---------------------------------------------------------------- mandrel frame

def random_poses(rng, n):
    p = rng.normal(size=(n, 6))
    p[:, 3:] *= 0.8
    return p


def test_identity_mandrel_leaves_device():
    rng = np.random.default_rng(5)
    dev = make_traj(random_poses(rng, 8))
    rel = to_mandrel_frame(dev, make_traj(np.zeros((8, 6))))
    assert rel.frame == Frame.MANDREL
    assert np.allclose(rel.poses, dev.poses, atol=1e-12)


def test_self_relative_pose_is_zero():
    rng = np.random.default_rng(6)
    dev = make_traj(random_poses(rng, 8))
    rel = to_mandrel_frame(dev, dev)
    assert np.allclose(rel.poses, 0.0, atol=1e-12)


def test_pure_translation_offset():
    dev = make_traj(np.tile([0.3, 0.2, 0, 0, 0, 0], (3, 1)))
    man = make_traj(np.tile([0.1, 0, 0, 0, 0, 0], (3, 1)))
    rel = to_mandrel_frame(dev, man)
    # oracle: explicit 4x4 inverse
    T = np.linalg.inv(pose_to_matrix(man.poses[0])) @ pose_to_matrix(dev.poses[0])
    assert np.allclose(T[:3, 3], [0.2, 0.2, 0.0])
    assert np.allclose(rel.poses[:, :3], [0.2, 0.2, 0.0], atol=1e-15)


def test_mandrel_frame_matches_matrix_oracle_and_inverts():
    rng = np.random.default_rng(7)
    dev = make_traj(random_poses(rng, 10))
    man = make_traj(random_poses(rng, 10))
    rel = to_mandrel_frame(dev, man)
    for i in range(10):
        T = np.linalg.inv(pose_to_matrix(man.poses[i])) @ pose_to_matrix(dev.poses[i])
        assert np.allclose(pose_to_matrix(rel.poses[i]), T, atol=1e-12)
    back = from_mandrel_frame(rel, man)
    assert np.allclose(pose_to_matrix(back.poses), pose_to_matrix(dev.poses), atol=1e-10)


def test_mandrel_frame_length_mismatch():
    with pytest.raises(AlignmentError):
        to_mandrel_frame(make_traj(np.zeros((4, 6))), make_traj(np.zeros((5, 6))))
    a = make_traj(np.zeros((4, 6)))
    b = Trajectory(np.arange(4) * 0.2, np.zeros((4, 6)))
    with pytest.raises(AlignmentError):
        to_mandrel_frame(a, b)


# ---------------------------------------------------------------- CSV

def test_demo_csv_round_trip(tmp_path):
    rng = np.random.default_rng(8)
    dev = make_traj(random_poses(rng, 6))
    man = make_traj(random_poses(rng, 6))
    write_demo_csv(tmp_path / "d.csv", dev, man)
    d2, m2 = read_demo_csv(tmp_path / "d.csv")
    assert d2 == dev and m2 == man


def test_demo_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("t,dx,dy,dz,drx,dry,drz,mx,my,mz,mrx,mry,mrz\n0,1,2,3,4,5,6,7,8,9,10,11,12\n0.1,1,2\n")
    with pytest.raises(ParseError, match="bad.csv:3"):
        read_demo_csv(p)
    p.write_text("t,dx,dy,dz,drx,dry,drz,mx,my,mz,mrx,mry,mrz\n" + "0.2" + ",0" * 12 + "\n0.1" + ",0" * 12 + "\n")
    with pytest.raises(ValidationError, match="bad.csv"):
        read_demo_csv(p)


def test_demoset_requires_camera_frame_and_shared_times():
    a = make_traj(np.zeros((3, 6)))
    with pytest.raises(InvalidInputError):
        DemoSet(())
    with pytest.raises(InvalidInputError):
        DemoSet(((a, make_traj(np.zeros((3, 6)), Frame.MANDREL)),))
    assert len(DemoSet(((a, a),))) == 1
