"""Synthetic stitching demonstrations.

A base path through approach / pierce-and-pass / return waypoints is
resampled per demo with a random monotone time warp, optional short
out-and-back detours, and Gaussian pose noise, then expressed in a camera
frame through a slowly drifting mandrel pose.
"""

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidConfigError
from .geometry import matrix_to_pose, pose_to_matrix
from .trajectory import DemoSet, Frame, Trajectory, write_demo_csv

# mandrel-frame waypoints (m): approach the slot, loop through it, come back
DEFAULT_WAYPOINTS = (
    (-0.060, -0.020, 0.160),
    (-0.035, -0.012, 0.125),
    (-0.005, -0.002, 0.095),
    (0.020, 0.010, 0.085),
    (0.040, 0.028, 0.100),
    (0.034, 0.048, 0.128),
    (0.005, 0.045, 0.150),
    (-0.035, 0.018, 0.165),
    (-0.056, -0.014, 0.163),
)


@dataclass(frozen=True)
class DemoGenConfig:
    n_demos: int = 10
    waypoints: tuple = DEFAULT_WAYPOINTS
    scale: float = 0.65
    base_samples: int = 285
    rate: float = 30.0
    noise_pos: float = 0.001
    noise_rot: float = 0.01
    warp: float = 1.0
    burst_prob: float = 0.3
    burst_amplitude: float = 0.004
    mandrel_drift: float = 0.003
    seed: int = 0

    def __post_init__(self):
        if self.n_demos < 1:
            raise InvalidConfigError("n_demos must be at least 1")
        if self.noise_pos < 0 or self.noise_rot < 0:
            raise InvalidConfigError("noise levels must be non-negative")
        if self.base_samples < 4:
            raise InvalidConfigError("base_samples must be at least 4")
        if not 0.0 <= self.warp <= 1.0:
            raise InvalidConfigError("warp intensity must lie in [0, 1]")
        if not 0.0 <= self.burst_prob <= 1.0:
            raise InvalidConfigError("burst_prob must lie in [0, 1]")
        wp = np.asarray(self.waypoints, dtype=float)
        if wp.ndim != 2 or wp.shape[1] != 3 or len(wp) < 2:
            raise InvalidConfigError("waypoints must be a list of at least two 3-vectors")
        if np.any(np.linalg.norm(np.diff(wp, axis=0), axis=1) < 1e-9):
            raise InvalidConfigError("consecutive waypoints coincide")
        object.__setattr__(self, "waypoints", tuple(tuple(map(float, w)) for w in wp))

    def to_dict(self):
        d = asdict(self)
        d["waypoints"] = [list(w) for w in self.waypoints]
        return d

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise InvalidConfigError(f"unknown demogen settings: {sorted(unknown)}")
        d = dict(d)
        if "waypoints" in d:
            d["waypoints"] = tuple(tuple(w) for w in d["waypoints"])
        return cls(**d)


def _path_functions(config):
    wp = np.asarray(config.waypoints) * config.scale
    chord = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(wp, axis=0), axis=1))])
    u = chord / chord[-1]
    pos = CubicSpline(u, wp, bc_type="natural")
    # dense arc-length table so that u is re-mapped to uniform speed
    fine = np.linspace(0.0, 1.0, 4001)
    seg = np.linalg.norm(np.diff(pos(fine), axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    arc /= arc[-1]

    def translation(s):
        return pos(np.interp(s, arc, fine))

    def rotation(s):
        s = np.asarray(s)[..., None]
        # gentle wrist roll and tilt along the stitch, well away from pi
        return np.concatenate([0.12 * np.sin(np.pi * s),
                               -0.08 + 0.16 * s,
                               0.25 * np.sin(2 * np.pi * s)], axis=-1)

    return translation, rotation


def base_trajectory(config):
    """Noise-free mandrel-frame path sampled at ``base_samples`` uniform-speed points."""
    translation, rotation = _path_functions(config)
    s = np.linspace(0.0, 1.0, config.base_samples)
    poses = np.hstack([translation(s), rotation(s)])
    return Trajectory(np.arange(config.base_samples) / config.rate, poses, Frame.MANDREL)


def _mandrel_track(n, rate, drift, rng):
    t = np.arange(n) / rate
    base = np.array([0.40, 0.10, 0.60, 0.30, -0.20, 0.10])
    phase = rng.uniform(0, 2 * np.pi, size=6)
    amp = np.array([drift, drift, drift, 5 * drift, 5 * drift, 5 * drift])
    slow = np.sin(2 * np.pi * 0.05 * t[:, None] + phase) * amp
    return base + slow


def generate(config):
    """Build a :class:`DemoSet` in the camera frame; deterministic per ``config.seed``."""
    rng = np.random.default_rng(config.seed)
    translation, rotation = _path_functions(config)
    n_base = config.base_samples
    spread = int(round(0.1 * config.warp * n_base))
    demos = []
    for _ in range(config.n_demos):
        n = n_base - (int(rng.integers(0, spread + 1)) if spread else 0)
        tau = np.linspace(0.0, 1.0, n)
        c = config.warp * rng.uniform(-0.5, 0.5)
        s = tau + c * np.sin(2 * np.pi * tau) / (2 * np.pi)
        rel = np.hstack([translation(s), rotation(s)])
        if config.burst_prob > 0 and rng.random() < config.burst_prob:
            length = int(rng.integers(10, 21))
            start = int(rng.integers(1, max(n - length - 1, 2)))
            direction = rng.normal(size=3)
            direction /= np.linalg.norm(direction)
            amp = config.burst_amplitude * rng.uniform(0.75, 1.5)
            k = np.arange(length)
            bump = np.sin(np.pi * k / (length - 1)) ** 2
            stop = min(start + length, n - 1)
            rel[start:stop, :3] += (amp * bump[:stop - start, None]) * direction
        mandrel = _mandrel_track(n, config.rate, config.mandrel_drift, rng)
        dev = matrix_to_pose(pose_to_matrix(mandrel) @ pose_to_matrix(rel))
        if config.noise_pos > 0:
            dev[:, :3] += rng.normal(scale=config.noise_pos, size=(n, 3))
        if config.noise_rot > 0:
            dev[:, 3:] += rng.normal(scale=config.noise_rot, size=(n, 3))
        t = np.arange(n) / config.rate
        demos.append((Trajectory(t, dev, Frame.CAMERA), Trajectory(t, mandrel, Frame.CAMERA)))
    return DemoSet(tuple(demos))


def write_demoset(demoset, directory, config=None):
    """Write one CSV per demo plus ``manifest.json``; returns the file paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, (device, mandrel) in zip(demoset.names, demoset.demos):
        p = directory / f"{name}.csv"
        write_demo_csv(p, device, mandrel)
        paths.append(p)
    manifest = {"files": [p.name for p in paths]}
    if config is not None:
        manifest["seed"] = config.seed
        manifest["config"] = config.to_dict()
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return paths
