"""Fixed-capacity FIFO experience buffer."""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError, NotReadyError


@dataclass(frozen=True)
class Transition:
    s: np.ndarray
    a: int
    s_next: np.ndarray
    r: float
    terminal: bool = False

    def __post_init__(self):
        if not 0 <= int(self.a) <= 125:
            raise InvalidInputError(f"action id {self.a} outside [0, 125]")
        if not np.isfinite(self.r):
            raise InvalidInputError("reward must be finite")


class ExperienceBuffer:
    """Ring buffer of transitions backed by preallocated arrays.

    Parameters
    ----------
    capacity : int
        Maximum number of stored transitions; the oldest is overwritten first.
    state_dim : int
        Width of the state vectors.
    """

    def __init__(self, capacity, state_dim):
        if capacity < 1:
            raise InvalidInputError("buffer capacity must be positive")
        self.capacity = int(capacity)
        self.state_dim = int(state_dim)
        self.s = np.zeros((self.capacity, self.state_dim))
        self.a = np.zeros(self.capacity, dtype=np.int64)
        self.s_next = np.zeros((self.capacity, self.state_dim))
        self.r = np.zeros(self.capacity)
        self.terminal = np.zeros(self.capacity, dtype=bool)
        self.size = 0
        self.inserted = 0

    def __len__(self):
        return self.size

    def push(self, tr):
        i = self.inserted % self.capacity
        self.s[i] = tr.s
        self.a[i] = tr.a
        self.s_next[i] = tr.s_next
        self.r[i] = tr.r
        self.terminal[i] = tr.terminal
        self.inserted += 1
        self.size = min(self.size + 1, self.capacity)

    def _order(self):
        # slot indices from oldest to newest
        if self.size < self.capacity:
            return np.arange(self.size)
        start = self.inserted % self.capacity
        return (np.arange(self.capacity) + start) % self.capacity

    def transitions(self):
        return [self._get(i) for i in self._order()]

    def _get(self, i):
        return Transition(self.s[i].copy(), int(self.a[i]), self.s_next[i].copy(),
                          float(self.r[i]), bool(self.terminal[i]))

    def sample_indices(self, n, rng):
        if n > self.size:
            raise NotReadyError(f"buffer holds {self.size} transitions, {n} requested")
        return rng.choice(self.size, size=n, replace=False)

    def sample_arrays(self, n, rng):
        idx = self.sample_indices(n, rng)
        return self.s[idx], self.a[idx], self.s_next[idx], self.r[idx], self.terminal[idx]

    def sample(self, n, rng):
        return [self._get(i) for i in self.sample_indices(n, rng)]

    def state_dict(self):
        n = self.size
        return {"capacity": self.capacity, "state_dim": self.state_dim,
                "inserted": self.inserted, "size": n,
                "s": self.s[:n].copy(), "a": self.a[:n].copy(), "s_next": self.s_next[:n].copy(),
                "r": self.r[:n].copy(), "terminal": self.terminal[:n].copy()}

    @classmethod
    def from_state_dict(cls, d):
        buf = cls(int(d["capacity"]), int(d["state_dim"]))
        n = int(d["size"])
        buf.s[:n] = d["s"]
        buf.a[:n] = d["a"]
        buf.s_next[:n] = d["s_next"]
        buf.r[:n] = d["r"]
        buf.terminal[:n] = d["terminal"]
        buf.size = n
        buf.inserted = int(d["inserted"])
        return buf

    def save(self, path):
        np.savez(path, **self.state_dict())

    @classmethod
    def load(cls, path):
        with np.load(path) as z:
            return cls.from_state_dict({k: z[k] for k in z.files})
