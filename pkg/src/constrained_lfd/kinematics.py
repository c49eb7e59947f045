"""Simulated 7-joint serial arm: FK, damped least-squares IK, capsule collision.

Link geometry follows the standard Denavit-Hartenberg convention
``A_i = Rz(theta_i) Tz(d_i) Tx(a_i) Rx(alpha_i)`` with ``theta_i = q_i + offset_i``.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidConfigError, InvalidInputError, JointLimitError, UnreachablePoseError
from .geometry import matrix_to_pose, matrix_to_rotvec, pose_to_matrix

N_JOINTS = 7
POS_TOL = 1e-4
ROT_TOL = 1e-3
DAMPING = 0.05
MAX_STEP = 0.2
MAX_ITERS = 200


@dataclass(frozen=True)
class ArmModel:
    """DH rows are ``(d, a, alpha, theta_offset)``; lengths in meters, angles in radians."""

    dh: np.ndarray
    joint_limits: np.ndarray
    link_radii: np.ndarray
    name: str = "arm"

    def __post_init__(self):
        dh = np.array(self.dh, dtype=float)
        lim = np.array(self.joint_limits, dtype=float)
        radii = np.array(self.link_radii, dtype=float)
        if dh.shape != (N_JOINTS, 4) or lim.shape != (N_JOINTS, 2) or radii.shape != (N_JOINTS,):
            raise InvalidConfigError("arm needs 7 DH rows, 7 limit pairs and 7 link radii")
        if np.any(lim[:, 0] >= lim[:, 1]):
            raise InvalidConfigError("joint limits need min < max")
        if np.any(radii <= 0):
            raise InvalidConfigError("link radii must be positive")
        for a in (dh, lim, radii):
            a.setflags(write=False)
        object.__setattr__(self, "dh", dh)
        object.__setattr__(self, "joint_limits", lim)
        object.__setattr__(self, "link_radii", radii)

    @property
    def lower(self):
        return self.joint_limits[:, 0]

    @property
    def upper(self):
        return self.joint_limits[:, 1]

    def within_limits(self, q, tol=1e-12):
        q = np.asarray(q, dtype=float)
        return bool(np.all(q >= self.lower - tol) and np.all(q <= self.upper + tol))

    def to_dict(self):
        return {"name": self.name, "dh": self.dh.tolist(),
                "joint_limits": self.joint_limits.tolist(),
                "link_radii": self.link_radii.tolist()}

    @classmethod
    def from_dict(cls, doc):
        return cls(doc["dh"], doc["joint_limits"], doc["link_radii"], doc.get("name", "arm"))


def default_arm():
    """A generic 7-DoF anthropomorphic chain (LBR-iiwa-like link lengths).

    The last joint carries a pi twist and a pi angle offset so that, with the
    flange pointing straight down, the tool frame matches the base axes.
    """
    h = np.pi / 2
    dh = [
        (0.340, 0.0, -h, 0.0),
        (0.000, 0.0, h, 0.0),
        (0.400, 0.0, h, 0.0),
        (0.000, 0.0, -h, 0.0),
        (0.400, 0.0, -h, 0.0),
        (0.000, 0.0, h, 0.0),
        (0.150, 0.0, np.pi, np.pi),
    ]
    lim = np.radians([170, 120, 170, 120, 170, 120, 175])
    limits = np.stack([-lim, lim], axis=1)
    radii = [0.07, 0.07, 0.06, 0.06, 0.05, 0.05, 0.03]
    return ArmModel(dh, limits, radii, name="generic-7dof")


# flange down, tool point at (0.5, 0, 0.3) in the base frame
HOME = np.array([0.0, 0.4779, 0.0, -1.7527, 0.0, 0.9110, 0.0])


def _check_q(arm, q):
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.shape != (N_JOINTS,) or not np.all(np.isfinite(q)):
        raise InvalidInputError("joint vector must hold 7 finite angles")
    if not arm.within_limits(q):
        raise JointLimitError(f"joint vector outside limits: {np.round(q, 4).tolist()}")
    return q


def link_frames(arm, q):
    """Homogeneous transforms of frames 0..7, shape (8, 4, 4)."""
    d, a, alpha, off = arm.dh.T
    th = q + off
    ct, st = np.cos(th), np.sin(th)
    ca, sa = np.cos(alpha), np.sin(alpha)
    A = np.zeros((N_JOINTS, 4, 4))
    A[:, 0, 0] = ct
    A[:, 0, 1] = -st * ca
    A[:, 0, 2] = st * sa
    A[:, 0, 3] = a * ct
    A[:, 1, 0] = st
    A[:, 1, 1] = ct * ca
    A[:, 1, 2] = -ct * sa
    A[:, 1, 3] = a * st
    A[:, 2, 1] = sa
    A[:, 2, 2] = ca
    A[:, 2, 3] = d
    A[:, 3, 3] = 1.0
    frames = np.empty((N_JOINTS + 1, 4, 4))
    frames[0] = np.eye(4)
    for i in range(N_JOINTS):
        frames[i + 1] = frames[i] @ A[i]
    return frames


def forward_kinematics(arm, q):
    """End-effector pose as a 6-vector plus the eight link frames."""
    q = _check_q(arm, q)
    frames = link_frames(arm, q)
    return matrix_to_pose(frames[-1]), frames


def jacobian(frames):
    """Geometric Jacobian (6x7): linear rows first, angular rows last."""
    z = frames[:-1, :3, 2]
    o = frames[:-1, :3, 3]
    p = frames[-1, :3, 3]
    J = np.empty((6, N_JOINTS))
    J[:3] = np.cross(z, p - o).T
    J[3:] = z.T
    return J


def _pose_error(T_target, T):
    dp = T_target[:3, 3] - T[:3, 3]
    # rotation error expressed in the base frame
    dr = T[:3, :3] @ matrix_to_rotvec(T[:3, :3].T @ T_target[:3, :3])
    return dp, dr


def inverse_kinematics(arm, target, seed, pos_tol=POS_TOL, rot_tol=ROT_TOL,
                       damping=DAMPING, max_step=MAX_STEP, max_iters=MAX_ITERS):
    """Damped least-squares IK started from ``seed``.

    ``target`` is a 6-vector, a :class:`Pose6D`, or a 4x4 transform. Steps
    are scaled so no joint moves more than ``max_step`` per iteration and
    the iterate is clamped to the joint limits.

    Raises
    ------
    UnreachablePoseError
        When tolerance is not met within ``max_iters`` iterations.
    """
    q = _check_q(arm, seed).copy()
    if hasattr(target, "matrix"):
        T_target = target.matrix()
    else:
        target = np.asarray(target, dtype=float)
        T_target = target if target.shape == (4, 4) else pose_to_matrix(target)
    lam2 = damping * damping
    lo, hi = arm.lower, arm.upper
    for _ in range(max_iters + 1):
        frames = link_frames(arm, q)
        dp, dr = _pose_error(T_target, frames[-1])
        if np.linalg.norm(dp) < pos_tol and np.linalg.norm(dr) < rot_tol:
            return q
        J = jacobian(frames)
        e = np.concatenate([dp, dr])
        dq = J.T @ np.linalg.solve(J @ J.T + lam2 * np.eye(6), e)
        m = np.abs(dq).max()
        if m > max_step:
            dq *= max_step / m
        q = np.clip(q + dq, lo, hi)
    raise UnreachablePoseError(
        f"IK did not converge in {max_iters} iterations "
        f"(position error {np.linalg.norm(dp):.3g} m, orientation error {np.linalg.norm(dr):.3g} rad)")


def joint_delta(q1, q2):
    """Sum of absolute joint differences, in degrees."""
    return float(np.degrees(np.abs(np.asarray(q2, dtype=float) - np.asarray(q1, dtype=float)).sum()))


# ------------------------------------------------------------------ collision

@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidConfigError("sphere radius must be positive")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).reshape(3))

    def bounding_sphere(self):
        return self.center, self.radius

    def distance_to_segment(self, p0, p1):
        return max(segment_point_distance(p0, p1, self.center) - self.radius, 0.0)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by its min and max corners."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float).reshape(3)
        hi = np.asarray(self.hi, dtype=float).reshape(3)
        if np.any(hi <= lo):
            raise InvalidConfigError("box needs max > min on every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def bounding_sphere(self):
        return 0.5 * (self.lo + self.hi), 0.5 * float(np.linalg.norm(self.hi - self.lo))

    def distance_to_segment(self, p0, p1):
        return segment_box_distance(p0, p1, self.lo, self.hi)


@dataclass(frozen=True)
class Cylinder:
    """Solid finite cylinder: base center, axis direction, radius, height."""

    base: np.ndarray
    axis: np.ndarray
    radius: float
    height: float

    def __post_init__(self):
        if not (self.radius > 0 and self.height > 0):
            raise InvalidConfigError("cylinder radius and height must be positive")
        axis = np.asarray(self.axis, dtype=float).reshape(3)
        n = np.linalg.norm(axis)
        if n == 0:
            raise InvalidConfigError("cylinder axis must be nonzero")
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float).reshape(3))
        object.__setattr__(self, "axis", axis / n)

    def bounding_sphere(self):
        c = self.base + 0.5 * self.height * self.axis
        return c, float(np.hypot(self.radius, 0.5 * self.height))

    def point_distance(self, p):
        v = np.asarray(p, dtype=float) - self.base
        h = v @ self.axis
        radial = v - h[..., None] * self.axis
        rho = np.linalg.norm(radial, axis=-1)
        dr = np.maximum(rho - self.radius, 0.0)
        dh = np.maximum(np.maximum(-h, h - self.height), 0.0)
        return np.hypot(dr, dh)

    def distance_to_segment(self, p0, p1):
        # the point-to-solid distance is convex along the segment
        a, b = 0.0, 1.0
        d = p1 - p0
        ts = None
        for _ in range(9):
            ts = np.linspace(a, b, 33)
            f = self.point_distance(p0 + ts[:, None] * d)
            i = int(np.argmin(f))
            if f[i] == 0.0:
                return 0.0
            a, b = ts[max(i - 1, 0)], ts[min(i + 1, 32)]
        return float(f[i])


def segment_point_distance(p0, p1, c):
    d = p1 - p0
    dd = d @ d
    t = 0.0 if dd == 0.0 else min(max((c - p0) @ d / dd, 0.0), 1.0)
    return float(np.linalg.norm(p0 + t * d - c))


def segment_box_distance(p0, p1, lo, hi):
    """Exact distance from a segment to an axis-aligned box.

    The squared distance is a convex piecewise quadratic in the segment
    parameter; each piece is minimized in closed form.
    """
    d = p1 - p0
    cuts = [0.0, 1.0]
    for ax in range(3):
        if d[ax] != 0.0:
            for bound in (lo[ax], hi[ax]):
                t = (bound - p0[ax]) / d[ax]
                if 0.0 < t < 1.0:
                    cuts.append(t)
    cuts = sorted(cuts)
    best = np.inf
    for t0, t1 in zip(cuts[:-1], cuts[1:]):
        pm = p0 + 0.5 * (t0 + t1) * d
        num = 0.0
        den = 0.0
        for ax in range(3):
            if pm[ax] < lo[ax]:
                c = p0[ax] - lo[ax]
            elif pm[ax] > hi[ax]:
                c = p0[ax] - hi[ax]
            else:
                continue
            num += c * d[ax]
            den += d[ax] * d[ax]
        t = t0 if den == 0.0 else min(max(-num / den, t0), t1)
        p = p0 + t * d
        g = np.maximum(np.maximum(lo - p, p - hi), 0.0)
        best = min(best, float(g @ g))
    return float(np.sqrt(best))


@dataclass(frozen=True)
class Scene:
    """Obstacles in the arm base frame plus the mandrel pose in that frame."""

    obstacles: tuple = field(default_factory=tuple)
    mandrel_pose: np.ndarray = field(default_factory=lambda: np.zeros(6))

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        mp = np.asarray(self.mandrel_pose, dtype=float).reshape(6)
        mp.setflags(write=False)
        object.__setattr__(self, "mandrel_pose", mp)

    def mandrel_transform(self):
        return pose_to_matrix(self.mandrel_pose)

    def to_dict(self):
        out = []
        for ob in self.obstacles:
            if isinstance(ob, Sphere):
                out.append({"type": "sphere", "center": ob.center.tolist(), "radius": ob.radius})
            elif isinstance(ob, Box):
                out.append({"type": "box", "min": ob.lo.tolist(), "max": ob.hi.tolist()})
            else:
                out.append({"type": "cylinder", "base": ob.base.tolist(), "axis": ob.axis.tolist(),
                            "radius": ob.radius, "height": ob.height})
        return {"mandrel_pose": self.mandrel_pose.tolist(), "obstacles": out}

    @classmethod
    def from_dict(cls, doc):
        obs = []
        for o in doc.get("obstacles", []):
            kind = o.get("type")
            if kind == "sphere":
                obs.append(Sphere(o["center"], o["radius"]))
            elif kind == "box":
                obs.append(Box(o["min"], o["max"]))
            elif kind == "cylinder":
                obs.append(Cylinder(o["base"], o["axis"], o["radius"], o["height"]))
            else:
                raise InvalidConfigError(f"unknown obstacle type {kind!r}")
        return cls(tuple(obs), doc.get("mandrel_pose", np.zeros(6)))


def default_scene():
    """Mandrel cylinder along y under the stitch region, resting above a table block."""
    return Scene(
        obstacles=(
            Cylinder(base=(0.5, -0.15, 0.18), axis=(0.0, 1.0, 0.0), radius=0.025, height=0.30),
            Box(lo=(0.30, -0.30, 0.0), hi=(0.70, 0.30, 0.10)),
        ),
        mandrel_pose=(0.5, 0.0, 0.2, 0.0, 0.0, 0.0),
    )


def link_segments(frames):
    o = frames[:, :3, 3]
    return o[:-1], o[1:]


def check_collision(arm, q, scene, frames=None):
    """True iff some link capsule overlaps some obstacle."""
    if not scene.obstacles:
        return False
    if frames is None:
        frames = link_frames(arm, _check_q(arm, q))
    starts, ends = link_segments(frames)
    for ob in scene.obstacles:
        c, rb = ob.bounding_sphere()
        for p0, p1, r in zip(starts, ends, arm.link_radii):
            if segment_point_distance(p0, p1, c) >= rb + r:
                continue
            if ob.distance_to_segment(p0, p1) < r:
                return True
    return False


def load_arm(path):
    return ArmModel.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def load_scene(path):
    return Scene.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
