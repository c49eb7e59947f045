"""Rotation-vector and homogeneous-transform helpers.

Rotations are carried as rotation vectors (axis * angle). All functions
accept a single 3-vector or a stack of shape ``(..., 3)``.
"""

import numpy as np

from .errors import InvalidInputError

SMALL_ANGLE = 1e-8
# below this sin(theta) the axis is recovered from the symmetric part
NEAR_PI_SIN = 1e-3


def skew(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def rotvec_to_matrix(r):
    """Rodrigues' formula, with a second-order series near zero angle.

    Parameters
    ----------
    r : array_like, shape (..., 3)
        Rotation vector(s) in radians.

    Returns
    -------
    ndarray, shape (..., 3, 3)
    """
    r = np.asarray(r, dtype=float)
    if r.shape[-1] != 3:
        raise InvalidInputError(f"rotation vector must have 3 components, got shape {r.shape}")
    if not np.all(np.isfinite(r)):
        raise InvalidInputError("rotation vector contains non-finite values")
    theta = np.linalg.norm(r, axis=-1)
    K = skew(r)
    K2 = K @ K
    small = theta < SMALL_ANGLE
    safe = np.where(small, 1.0, theta)
    a = np.where(small, 1.0, np.sin(safe) / safe)
    b = np.where(small, 0.5, (1.0 - np.cos(safe)) / safe**2)
    eye = np.broadcast_to(np.eye(3), K.shape)
    return eye + a[..., None, None] * K + b[..., None, None] * K2


def _canonical_sign(axis):
    # angle == pi: r and -r are the same rotation; first nonzero component positive
    for c in axis:
        if abs(c) > 1e-12:
            return axis if c > 0 else -axis
    return axis


def _matrix_to_rotvec_single(R):
    vee = 0.5 * np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    s = np.linalg.norm(vee)
    c = 0.5 * (np.trace(R) - 1.0)
    theta = np.arctan2(s, c)
    if theta < SMALL_ANGLE:
        return vee
    if s > NEAR_PI_SIN or c > 0.0:
        return vee * (theta / s)
    # near pi: R + R^T = 2 cos(theta) I + 2 (1 - cos(theta)) k k^T
    B = (0.5 * (R + R.T) - c * np.eye(3)) / (1.0 - c)
    i = int(np.argmax(np.diag(B)))
    axis = B[:, i] / np.sqrt(max(B[i, i], 1e-300))
    axis /= np.linalg.norm(axis)
    if s > 0 and np.dot(axis, vee) < 0:
        axis = -axis
    if np.pi - theta < 1e-12 or s == 0.0:
        axis = _canonical_sign(axis)
    return axis * theta


def matrix_to_rotvec(R):
    """Inverse of :func:`rotvec_to_matrix` returning the canonical representative.

    The returned angle lies in ``[0, pi]``; at exactly ``pi`` the axis is
    chosen with its first nonzero component positive.
    """
    R = np.asarray(R, dtype=float)
    if R.shape[-2:] != (3, 3):
        raise InvalidInputError(f"expected (..., 3, 3) matrices, got {R.shape}")
    if not np.all(np.isfinite(R)):
        raise InvalidInputError("rotation matrix contains non-finite values")
    if R.ndim == 2:
        return _matrix_to_rotvec_single(R)
    flat = R.reshape(-1, 3, 3)
    out = np.array([_matrix_to_rotvec_single(m) for m in flat])
    return out.reshape(R.shape[:-2] + (3,))


def canonical_rotvec(r):
    return matrix_to_rotvec(rotvec_to_matrix(r))


def pose_to_matrix(pose6):
    """(x, y, z, rx, ry, rz) -> 4x4 homogeneous transform(s)."""
    p = np.asarray(pose6, dtype=float)
    T = np.zeros(p.shape[:-1] + (4, 4))
    T[..., :3, :3] = rotvec_to_matrix(p[..., 3:])
    T[..., :3, 3] = p[..., :3]
    T[..., 3, 3] = 1.0
    return T


def matrix_to_pose(T):
    T = np.asarray(T, dtype=float)
    out = np.empty(T.shape[:-2] + (6,))
    out[..., :3] = T[..., :3, 3]
    out[..., 3:] = matrix_to_rotvec(T[..., :3, :3])
    return out


def invert_transform(T):
    T = np.asarray(T, dtype=float)
    R = T[..., :3, :3]
    Rt = np.swapaxes(R, -1, -2)
    out = np.zeros_like(T)
    out[..., :3, :3] = Rt
    out[..., :3, 3] = -(Rt @ T[..., :3, 3, None])[..., 0]
    out[..., 3, 3] = 1.0
    return out


def rotation_angle_between(R_a, R_b):
    """Angle (rad) of the relative rotation ``R_a^T R_b``."""
    return float(np.linalg.norm(matrix_to_rotvec(np.asarray(R_a).T @ np.asarray(R_b))))
