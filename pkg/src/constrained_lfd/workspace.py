"""Discretized search space and per-step action targets."""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError

N_ACTIONS = 126
STATIONARY = 0
LATTICE_LEVELS = (-1.0, -0.5, 0.0, 0.5, 1.0)
# x-major product of the levels; index 0 is the stationary action
LATTICE_OFFSETS = np.array(list(itertools.product(LATTICE_LEVELS, repeat=3)))
CENTER_ACTION = 1 + int(np.flatnonzero(np.all(LATTICE_OFFSETS == 0.0, axis=1))[0])
ENVELOPE_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    origin: np.ndarray
    step: float
    dims: tuple

    def __post_init__(self):
        if not self.step > 0:
            raise InvalidConfigError("grid step must be positive")
        if len(self.dims) != 3 or any(int(d) < 1 for d in self.dims):
            raise InvalidConfigError("grid dims must be three positive integers")
        origin = np.array(self.origin, dtype=float).reshape(3)
        origin.setflags(write=False)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def extent(self):
        return np.array(self.dims, dtype=float) * self.step

    @property
    def upper(self):
        return self.origin + self.extent

    def contains(self, p):
        p = np.asarray(p, dtype=float)
        return bool(np.all(p >= self.origin) and np.all(p <= self.upper))

    def cell(self, p):
        idx = np.floor((np.asarray(p, dtype=float) - self.origin) / self.step).astype(int)
        return tuple(np.clip(idx, 0, np.array(self.dims) - 1))

    def normalize(self, p):
        """Grid-local coordinates in [0, 1] per axis."""
        return (np.asarray(p, dtype=float) - self.origin) / self.extent

    def to_dict(self):
        return {"origin": self.origin.tolist(), "step": self.step, "dims": list(self.dims)}


def build_grid(model, delta):
    """Bounding grid of the mean +/- sigma translation envelope, padded by one cell."""
    if not (isinstance(delta, (int, float, np.floating)) and delta > 0):
        raise InvalidConfigError(f"grid step must be positive, got {delta}")
    mu = model.mean_translations
    sd = model.sigma_translations
    lo = (mu - sd).min(axis=0)
    hi = (mu + sd).max(axis=0)
    cells = np.ceil((hi - lo) / delta - 1e-9).astype(int)
    dims = np.maximum(cells, 1) + 2
    return Grid(lo - delta, float(delta), tuple(int(d) for d in dims))


def envelope_bounds(model, k):
    mu = model.mean_translations[k]
    sd = model.sigma_translations[k]
    return mu - sd, mu + sd


def in_envelope(model, k, p, tol=ENVELOPE_TOL):
    lo, hi = envelope_bounds(model, k)
    p = np.asarray(p, dtype=float)
    return bool(np.all(p >= lo - tol) and np.all(p <= hi + tol))


def action_targets(model, k, current, sampling="lattice", rng=None):
    """The 126 candidate positions for leaving step ``k``.

    Row 0 is ``current`` (stay put). Rows 1..125 are the 5x5x5 lattice at
    {-1, -1/2, 0, 1/2, 1} sigma around the mean translation of step k+1, or,
    with ``sampling="random"``, uniform draws inside that sigma box.
    """
    if not 0 <= k < len(model) - 1:
        raise IndexError(f"step index {k} outside [0, {len(model) - 2}]")
    mu = model.mean_translations[k + 1]
    sd = model.sigma_translations[k + 1]
    out = np.empty((N_ACTIONS, 3))
    out[0] = current
    if sampling == "lattice":
        out[1:] = mu + LATTICE_OFFSETS * sd
    elif sampling == "random":
        if rng is None:
            raise InvalidConfigError("random target sampling needs an rng")
        out[1:] = mu + rng.uniform(-1.0, 1.0, size=(N_ACTIONS - 1, 3)) * sd
    else:
        raise InvalidConfigError(f"unknown sampling mode {sampling!r}")
    return out
