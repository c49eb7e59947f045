"""Dynamic time warping and the per-step mean / standard-deviation model."""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .trajectory import Frame, Pose6D, Trajectory


@dataclass(frozen=True)
class WarpPath:
    pairs: tuple
    cost: float

    def __len__(self):
        return len(self.pairs)


def _as_2d(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or len(x) == 0:
        raise InvalidInputError("dtw needs a non-empty sequence")
    return x


def dtw(a, b):
    """Symmetric-step DTW with Euclidean local distance and no window.

    ``a`` and ``b`` are sequences of scalars or of equal-width vectors.
    Ties during backtracking prefer the diagonal, then a step in ``a``.
    """
    a = _as_2d(a)
    b = _as_2d(b)
    if a.shape[1] != b.shape[1]:
        raise InvalidInputError("sequences have different widths")
    n, m = len(a), len(b)
    dist = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=-1))
    D = np.full((n + 1, m + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, n + 1):
        row_prev = D[i - 1]
        row = D[i]
        d_i = dist[i - 1]
        # diagonal and vertical moves are known before the row scan
        best = np.minimum(row_prev[:-1], row_prev[1:])
        for j in range(1, m + 1):
            prev = best[j - 1]
            if row[j - 1] < prev:
                prev = row[j - 1]
            row[j] = d_i[j - 1] + prev
    i, j = n, m
    pairs = [(n - 1, m - 1)]
    while (i, j) != (1, 1):
        cands = ((D[i - 1, j - 1], i - 1, j - 1),
                 (D[i - 1, j], i - 1, j),
                 (D[i, j - 1], i, j - 1))
        _, i, j = min(cands, key=lambda c: c[0])  # min keeps the first of equal keys
        pairs.append((i - 1, j - 1))
    pairs.reverse()
    cost = 0.0
    for p, q in pairs:
        cost += dist[p, q]
    return WarpPath(tuple(pairs), float(cost))


def reference_index(lengths):
    """Index of the median-length sequence; ties go to the lower index."""
    order = sorted(range(len(lengths)), key=lambda i: (lengths[i], i))
    return order[(len(order) - 1) // 2]


def _is_aligned(trajs, ref):
    return all(len(t) == len(ref) and np.array_equal(t.times, ref.times) for t in trajs)


def align_set(demos):
    """Warp every demonstration onto the timeline of the median-length one.

    All six components, each scaled by its global standard deviation, enter
    the DTW distance. Source samples that map onto one reference index are
    averaged. A set whose members already share the reference timestamps is
    returned unchanged.
    """
    demos = list(demos)
    if not demos:
        raise InvalidInputError("align_set needs at least one trajectory")
    for d in demos:
        if d.frame != Frame.MANDREL:
            raise InvalidInputError("demonstrations must be in the mandrel frame before alignment")
    ref_i = reference_index([len(d) for d in demos])
    ref = demos[ref_i]
    if len(demos) == 1 or _is_aligned(demos, ref):
        return demos
    scale = np.concatenate([d.poses for d in demos]).std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    ref_n = ref.poses / scale
    out = []
    for k, d in enumerate(demos):
        if k == ref_i:
            out.append(ref)
            continue
        path = dtw(ref_n, d.poses / scale)
        acc = np.zeros((len(ref), 6))
        cnt = np.zeros(len(ref))
        for i, j in path.pairs:
            acc[i] += d.poses[j]
            cnt[i] += 1
        out.append(Trajectory(ref.times, acc / cnt[:, None], Frame.MANDREL))
    return out


@dataclass(frozen=True)
class MeanVarModel:
    """Per-step mean pose and per-axis population standard deviation."""

    mean: np.ndarray
    sigma: np.ndarray
    count: int
    times: np.ndarray = None

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float)
        sigma = np.array(self.sigma, dtype=float)
        if mean.ndim != 2 or mean.shape[1] != 6 or sigma.shape != mean.shape:
            raise InvalidInputError("mean and sigma must both have shape (T, 6)")
        if len(mean) < 2:
            raise InvalidInputError("model needs at least 2 steps")
        if np.any(sigma < 0) or not np.all(np.isfinite(sigma)) or not np.all(np.isfinite(mean)):
            raise InvalidInputError("sigma must be finite and non-negative")
        times = np.arange(len(mean), dtype=float) if self.times is None else np.array(self.times, dtype=float)
        for a in (mean, sigma, times):
            a.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "count", int(self.count))

    def __len__(self):
        return len(self.mean)

    @property
    def length(self):
        return len(self.mean)

    @property
    def mean_translations(self):
        return self.mean[:, :3]

    @property
    def sigma_translations(self):
        return self.sigma[:, :3]

    def mean_pose(self, k):
        return Pose6D.from_array(self.mean[k])

    def mean_trajectory(self):
        return Trajectory(self.times, self.mean, Frame.MANDREL)

    def to_dict(self):
        return {
            "length": len(self),
            "mean": self.mean.tolist(),
            "sigma": self.sigma.tolist(),
            "count": self.count,
        }

    @classmethod
    def from_dict(cls, doc):
        model = cls(np.array(doc["mean"]), np.array(doc["sigma"]), doc["count"])
        if doc.get("length", len(model)) != len(model):
            raise InvalidInputError("model 'length' disagrees with the mean array")
        return model

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict()), encoding="utf-8")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def build_model(aligned):
    aligned = list(aligned)
    if not aligned:
        raise InvalidInputError("build_model needs at least one trajectory")
    n = len(aligned[0])
    if any(len(a) != n for a in aligned):
        raise InvalidInputError("aligned trajectories must share one length")
    stack = np.stack([a.poses for a in aligned])
    return MeanVarModel(stack.mean(axis=0), stack.std(axis=0), len(aligned), aligned[0].times)
